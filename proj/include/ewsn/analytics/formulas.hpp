#pragma once

#include "ewsn/sim/time.hpp"

namespace ewsn::analytics {

// active / period
double duty_cycle(SimTime active, SimTime period);

// Expected wait until the k-th of N uniform wake-ups in a period W: W k / (N + 1).
SimTime beta_rendezvous_expectation(SimTime W, int N, int k = 1);

// Anycast rendezvous over unicast rendezvous, (W/(N+1)) / (W/2) = 2 / (1 + N).
double sofa_gain(int N);

}  // namespace ewsn::analytics
