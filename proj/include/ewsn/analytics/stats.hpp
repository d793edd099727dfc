#pragma once

#include <optional>
#include <vector>

namespace ewsn::analytics {

// Box-plot summary. Quartiles use linear interpolation between order
// statistics (the "type 7" rule of most stats packages).
struct Percentiles {
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double max = 0.0;
};

std::optional<Percentiles> percentiles(std::vector<double> v);
// q in [0, 1]; nullopt for an empty sample
std::optional<double> quantile(std::vector<double> v, double q);
std::optional<double> median(std::vector<double> v);
std::optional<double> mean(const std::vector<double>& v);

}  // namespace ewsn::analytics
