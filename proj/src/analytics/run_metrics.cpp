#include "ewsn/analytics/run_metrics.hpp"

#include <algorithm>

namespace ewsn::analytics {

double RunMetrics::duty_cycle(NodeId n) const {
  const SimTime span = measured();
  if (span <= SimTime::zero() || n >= nodes.size()) return 0.0;
  double dc = static_cast<double>(nodes[n].radio_on.us()) / static_cast<double>(span.us());
  return std::clamp(dc, 0.0, 1.0);
}

double RunMetrics::mean_duty_cycle() const {
  if (nodes.empty()) return 0.0;
  double s = 0.0;
  for (NodeId i = 0; i < nodes.size(); ++i) s += duty_cycle(i);
  return s / static_cast<double>(nodes.size());
}

double RunMetrics::global_exchange_rate() const {
  const double span = measured().seconds();
  if (span <= 0.0) return 0.0;
  std::uint64_t n = 0;
  for (const auto& m : nodes) n += m.initiator_successes;
  return static_cast<double>(n) / span;
}

double RunMetrics::mean_exchange_rate() const {
  const double span = measured().seconds();
  if (span <= 0.0 || nodes.empty()) return 0.0;
  std::uint64_t n = 0;
  for (const auto& m : nodes) n += m.exchanges();
  return static_cast<double>(n) / span / static_cast<double>(nodes.size());
}

std::uint64_t RunMetrics::mass_successes() const {
  std::uint64_t n = 0;
  for (const auto& m : nodes) n += m.initiator_successes;
  return n;
}

std::uint64_t RunMetrics::disagreements() const {
  std::uint64_t n = 0;
  for (const auto& m : nodes) n += m.disagreements;
  return n;
}

std::optional<double> RunMetrics::delivery_ratio() const {
  if (generated == 0) return std::nullopt;
  return std::min(1.0, static_cast<double>(delivered) / static_cast<double>(generated));
}

std::optional<double> RunMetrics::mass_delivery_ratio() const {
  const auto s = mass_successes();
  const auto d = disagreements();
  if (s + d == 0) return std::nullopt;
  return static_cast<double>(s) / static_cast<double>(s + d);
}

}  // namespace ewsn::analytics
