#include "ewsn/analytics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ewsn/errors.hpp"

namespace ewsn::analytics {

namespace {
double sorted_quantile(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}
}  // namespace

std::optional<double> quantile(std::vector<double> v, double q) {
  if (q < 0.0 || q > 1.0) throw ConfigError("quantile must be in [0,1]");
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  return sorted_quantile(v, q);
}

std::optional<Percentiles> percentiles(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  return Percentiles{v.front(), sorted_quantile(v, 0.25), sorted_quantile(v, 0.5),
                     sorted_quantile(v, 0.75), v.back()};
}

std::optional<double> median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

std::optional<double> mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace ewsn::analytics
