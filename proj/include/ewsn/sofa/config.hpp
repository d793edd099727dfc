#pragma once

#include "ewsn/sim/rng.hpp"
#include "ewsn/sim/time.hpp"

namespace ewsn::sofa {

enum class MacMode { sofa, lpl_unicast };
enum class AckContention { sleep_on_collision, retransmit };

struct MacConfig {
  SimTime W = SimTime::from_s(1);
  SimTime T = SimTime::from_s(2);
  SimTime listen = SimTime::from_ms(10);
  SimTime t_b = SimTime::from_us(2500);  // beacon start to beacon start
  SimTime beacon_air = SimTime::from_us(1000);
  SimTime ack_air = SimTime::from_us(1100);
  SimTime data_air = SimTime::from_us(4000);
  SimTime select_air = SimTime::from_us(1000);
  MacMode mode = MacMode::sofa;
  AckContention ack_contention = AckContention::sleep_on_collision;
  double retransmit_p = 0.5;
  int max_contention_rounds = 5;
  double give_up_factor = 1.5;  // strobe timeout in units of W
  bool jitter = true;

  SimTime strobe_timeout() const { return SimTime::from_us(static_cast<std::int64_t>(give_up_factor * W.us())); }
  void validate() const;
};

// prev + u, u ~ U[0.5W, 1.5W); exactly prev + W when jitter is off.
SimTime next_wakeup_time(SimTime prev, SimTime W, sim::RngStream& rng, bool jitter = true);

}  // namespace ewsn::sofa
