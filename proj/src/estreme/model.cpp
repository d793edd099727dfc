#include "ewsn/estreme/model.hpp"

#include <cmath>

#include "ewsn/errors.hpp"

namespace ewsn::estreme {

ErrorBound expected_error_bound(SimTime epsilon, int n, SimTime t_w) {
  if (epsilon < SimTime::zero()) throw ConfigError("epsilon must be >= 0");
  if (n < 1) throw ConfigError("n must be >= 1");
  if (t_w <= SimTime::zero()) throw ConfigError("t_w must be positive");
  const double eps = static_cast<double>(epsilon.us());
  const double tw = static_cast<double>(t_w.us());
  const double n1 = n + 1.0;
  ErrorBound b;
  b.rho = eps * n1 / tw;
  b.phi = -b.rho / (1.0 + b.rho);
  b.exact = -eps * n1 * n1 / (n * (tw + eps * n1));
  return b;
}

double collision_probability(int n, SimTime t_b, SimTime t_w) {
  if (n < 2) throw ConfigError("collision probability needs n >= 2");
  if (!(t_b > SimTime::zero() && t_b < t_w)) throw ConfigError("need 0 < t_b < t_w");
  const double q = static_cast<double>(t_b.us()) / static_cast<double>(t_w.us());
  const long intervals = static_cast<long>(t_w.us() / t_b.us());
  const double lq = std::log(q);
  double total = 0.0;
  for (long j = 1; j <= intervals; ++j) {
    const double rest = 1.0 - q * static_cast<double>(j);
    const double lrest = rest > 0 ? std::log(rest) : -INFINITY;
    for (int i = 2; i <= n; ++i) {
      const int k = n - i;
      double term;
      if (k == 0) {
        term = std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k + 1.0) + i * lq);
      } else if (rest <= 0) {
        term = 0.0;
      } else {
        term = std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k + 1.0) + i * lq + k * lrest);
      }
      total += term;
    }
  }
  return total;
}

double completion_probability(int n_c, double p) {
  if (n_c < 1) throw ConfigError("need at least one contender");
  if (p < 0 || p > 1) throw ConfigError("p must be in [0,1]");
  return n_c * p * std::pow(1.0 - p, n_c - 1);
}

double starvation_probability(int n_c, double p) {
  if (n_c < 1) throw ConfigError("need at least one contender");
  return std::pow(1.0 - p, n_c);
}

double best_retransmit_probability(int n_c, int grid_points) {
  if (grid_points < 2) throw ConfigError("grid too coarse");
  double best_p = 1.0;
  double best = -1.0;
  for (int g = 1; g <= grid_points; ++g) {
    const double p = static_cast<double>(g) / grid_points;
    const double c = completion_probability(n_c, p);
    if (c > best) {
      best = c;
      best_p = p;
    }
  }
  return best_p;
}

}  // namespace ewsn::estreme
