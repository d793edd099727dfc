#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>

#include "ewsn/sim/rng.hpp"
#include "ewsn/sim/time.hpp"

namespace ewsn::staffetta {

enum class PolicyKind { fixed, staffetta, always_on };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::staffetta;
  double fixed_hz = 1.0;
  double dc_max = 0.075;
  double omega_min = 0.1;
  std::size_t sma_window = 20;
  double bootstrap_hz = 1.0;  // until the first forwarding delay is observed
  // Staffetta intervals are 1/omega * (1 + U(-drift, drift)). Stands in for
  // clock drift; without it, neighbours with identical delays phase-lock.
  double drift = 0.05;
  void validate() const;
};

// DC_max / delta_f, floored at omega_min.
double compute_wakeup_frequency(double dc_max, SimTime delta_f, double omega_min);

class WakeupPolicy {
 public:
  explicit WakeupPolicy(PolicyConfig cfg = {});

  // Successful exchanges only; failed wake-ups must not call this.
  void update_forwarding_delay(SimTime observed);
  void reset();

  const PolicyConfig& config() const { return cfg_; }
  bool always_on() const { return cfg_.kind == PolicyKind::always_on; }
  // Hz; +inf for always-on nodes.
  double frequency() const { return omega_; }
  // Interval to the next wake-up. Fixed policies jitter it in [0.5, 1.5)/omega
  // like SOFA; Staffetta uses 1/omega up to the drift term.
  SimTime next_interval(sim::RngStream& rng) const;
  std::optional<SimTime> forwarding_delay() const;
  std::size_t observations() const { return window_.size(); }
  bool floored() const;

 private:
  void recompute();

  PolicyConfig cfg_;
  std::deque<std::int64_t> window_;
  std::int64_t sum_ = 0;
  double omega_ = 0;
};

}  // namespace ewsn::staffetta
