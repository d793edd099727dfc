#pragma once

#include <string>

#include "ewsn/errors.hpp"
#include "ewsn/sim/time.hpp"

namespace ewsn {

// Fault injection knobs shared by the MAC layers. Loss probabilities are per
// frame and per listener.
struct FaultConfig {
  double link_loss = 0.0;       // any frame
  double final_ack_loss = 0.0;  // last frame of the 3-way data phase
  double data_loss = 0.0;       // either data frame of the 3-way phase
  double select_loss = 0.0;     // collection select frame
  SimTime delay_epsilon;        // extra uncorrected delay on every naive rendezvous

  void validate() const {
    auto prob = [](double p, const char* what) {
      if (p < 0 || p >= 1) throw ConfigError(std::string(what) + " must be in [0,1)");
    };
    prob(link_loss, "link loss");
    prob(final_ack_loss, "final ack loss");
    prob(data_loss, "data loss");
    prob(select_loss, "select loss");
    if (delay_epsilon < SimTime::zero()) throw ConfigError("delay epsilon must be >= 0");
  }
};

}  // namespace ewsn
