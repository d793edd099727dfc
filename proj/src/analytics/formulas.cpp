#include "ewsn/analytics/formulas.hpp"

#include <cmath>

#include "ewsn/errors.hpp"

namespace ewsn::analytics {

double duty_cycle(SimTime active, SimTime period) {
  if (period <= SimTime::zero()) throw ConfigError("period must be positive");
  if (active < SimTime::zero() || active > period) throw ConfigError("active time must be in [0, period]");
  return static_cast<double>(active.us()) / static_cast<double>(period.us());
}

SimTime beta_rendezvous_expectation(SimTime W, int N, int k) {
  if (N < 1) throw ConfigError("need at least one neighbour");
  if (k < 1 || k > N) throw ConfigError("k must be in [1, N]");
  const double us = static_cast<double>(W.us()) * k / (N + 1);
  return SimTime::from_us(std::llround(us));
}

double sofa_gain(int N) {
  if (N < 1) throw ConfigError("need at least one neighbour");
  return 2.0 / (1.0 + N);
}

}  // namespace ewsn::analytics
