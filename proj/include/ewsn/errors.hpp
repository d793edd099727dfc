#pragma once

#include <stdexcept>
#include <string>

namespace ewsn {

// Bad scenario, bad parameter, bad input file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A protocol state machine reached a state it should never reach.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised by the engine when a handler fails; carries clock and node in what().
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ewsn
