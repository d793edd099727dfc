#pragma once

#include "ewsn/sim/time.hpp"

namespace ewsn::estreme {

struct ErrorBound {
  double rho = 0.0;
  double phi = 0.0;    // -rho / (1 + rho)
  double exact = 0.0;  // -eps (n+1)^2 / (n (t_w + eps (n+1)))
};

// Expected relative cardinality error when every sample carries an extra
// uncorrected delay eps.
ErrorBound expected_error_bound(SimTime epsilon, int n, SimTime t_w);

// Probability that two or more of n neighbours first wake up inside the same
// inter-beacon interval t_b, with wake-ups uniform over t_w.
double collision_probability(int n, SimTime t_b, SimTime t_w);

// One of n_c contenders retransmits alone: n_c p (1-p)^(n_c-1).
double completion_probability(int n_c, double p);
double starvation_probability(int n_c, double p);
// argmax of completion_probability over a regular grid on (0, 1]
double best_retransmit_probability(int n_c, int grid_points = 10000);

}  // namespace ewsn::estreme
