#include "ewsn/sofa/config.hpp"

#include "ewsn/errors.hpp"

namespace ewsn::sofa {

void MacConfig::validate() const {
  if (W <= SimTime::zero()) throw ConfigError("W must be positive");
  if (T <= SimTime::zero()) throw ConfigError("T must be positive");
  for (SimTime a : {beacon_air, ack_air, data_air, select_air})
    if (a <= SimTime::zero()) throw ConfigError("airtimes must be positive");
  if (t_b < beacon_air + ack_air) throw ConfigError("t_b must leave room for a beacon and its ack");
  if (listen < beacon_air + t_b) throw ConfigError("listen must cover one beacon airtime plus t_b");
  if (listen >= W) throw ConfigError("listen must be shorter than W");
  if (ack_contention == AckContention::retransmit && !(retransmit_p > 0 && retransmit_p <= 1))
    throw ConfigError("retransmit p must be in (0,1]");
  if (max_contention_rounds < 1) throw ConfigError("max contention rounds must be >= 1");
  if (!(give_up_factor > 0)) throw ConfigError("give-up factor must be positive");
}

SimTime next_wakeup_time(SimTime prev, SimTime W, sim::RngStream& rng, bool jitter) {
  if (!jitter) return prev + W;
  const std::int64_t w = W.us();
  const std::int64_t u = w / 2 + static_cast<std::int64_t>(rng.uniform01() * static_cast<double>(w));
  return prev + SimTime::from_us(std::min(u, w + w / 2 - 1));
}

}  // namespace ewsn::sofa
