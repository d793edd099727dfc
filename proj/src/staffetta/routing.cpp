#include "ewsn/staffetta/routing.hpp"

#include <cmath>

#include "ewsn/errors.hpp"

namespace ewsn::staffetta {

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::edc: return "edc";
    case MetricKind::qb: return "qb";
    case MetricKind::rw: return "rw";
    case MetricKind::direct: return "direct";
  }
  return "?";
}

MetricKind metric_from_string(const std::string& s) {
  if (s == "edc") return MetricKind::edc;
  if (s == "qb") return MetricKind::qb;
  if (s == "rw") return MetricKind::rw;
  if (s == "direct") return MetricKind::direct;
  throw ConfigError("unknown routing metric '" + s + "' (edc|qb|rw|direct)");
}

bool accept_forwarder(MetricKind kind, double beacon_metric, double own_metric, double margin) {
  switch (kind) {
    case MetricKind::edc:
      if (std::isinf(own_metric) && std::isinf(beacon_metric)) return true;
      return own_metric + margin < beacon_metric;
    case MetricKind::qb: return own_metric < beacon_metric;
    case MetricKind::rw: return true;
    case MetricKind::direct: return own_metric > beacon_metric;
  }
  return false;
}

std::optional<std::vector<double>> forwarding_probability(const std::vector<double>& omegas) {
  if (omegas.empty()) return std::nullopt;
  double sum = 0;
  for (double w : omegas) {
    if (!(w > 0) || !std::isfinite(w)) throw ConfigError("forwarder frequencies must be positive and finite");
    sum += w;
  }
  std::vector<double> p;
  p.reserve(omegas.size());
  for (double w : omegas) p.push_back(w / sum);
  return p;
}

double gradient_model_frequency(int hops, int forwarders, double dc_max, double omega1) {
  if (hops < 1) throw ConfigError("hop distance must be >= 1");
  if (forwarders < 1) throw ConfigError("need at least one forwarder");
  return std::pow(dc_max * (forwarders + 1), hops - 1) * omega1;
}

}  // namespace ewsn::staffetta
