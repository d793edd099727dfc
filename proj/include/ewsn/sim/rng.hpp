#pragma once

#include <cstdint>
#include <random>

#include "ewsn/sim/time.hpp"

namespace ewsn::sim {

// Each consumer of randomness gets its own stream so that adding a draw in
// one place never shifts another's sequence.
enum class StreamPurpose : std::uint32_t {
  wakeup = 1,
  mac = 2,
  traffic = 3,
  mobility = 4,
  topology = 5,
  faults = 6,
  capture = 7,
  placement = 8,
  experiment = 9,
};

std::uint64_t splitmix64(std::uint64_t& state);

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, NodeId node, StreamPurpose purpose);

  std::uint64_t next_u64() { return gen_(); }
  // 53-bit mantissa fill; portable across standard libraries unlike
  // std::uniform_real_distribution.
  double uniform01();
  double uniform(double lo, double hi);
  bool bernoulli(double p);
  // uniform integer in [0, n)
  std::uint64_t index(std::uint64_t n);
  double exponential(double rate);

  NodeId node() const { return node_; }

 private:
  std::mt19937_64 gen_;
  NodeId node_;
};

// Value in [lo, hi). Throws ConfigError when lo > hi; lo == hi returns lo.
double uniform_draw(RngStream& stream, double lo, double hi);

}  // namespace ewsn::sim
