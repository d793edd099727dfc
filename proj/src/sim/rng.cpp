#include "ewsn/sim/rng.hpp"

#include <cmath>
#include <string>

#include "ewsn/errors.hpp"

namespace ewsn::sim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
std::seed_seq make_seed(std::uint64_t master, NodeId node, StreamPurpose purpose) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= (static_cast<std::uint64_t>(node) << 20) ^ static_cast<std::uint64_t>(purpose);
  std::uint64_t b = splitmix64(s);
  std::uint64_t c = splitmix64(s);
  return std::seed_seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                       static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                       static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
}
}  // namespace

RngStream::RngStream(std::uint64_t master_seed, NodeId node, StreamPurpose purpose) : node_(node) {
  auto seq = make_seed(master_seed, node, purpose);
  gen_.seed(seq);
}

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return uniform_draw(*this, lo, hi); }

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

std::uint64_t RngStream::index(std::uint64_t n) {
  if (n == 0) throw ConfigError("RngStream::index: empty range");
  // rejection sampling keeps it unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return v % n;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw ConfigError("exponential rate must be positive");
  return -std::log1p(-uniform01()) / rate;
}

double uniform_draw(RngStream& stream, double lo, double hi) {
  if (lo > hi) {
    throw ConfigError("uniform_draw: lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
  }
  if (lo == hi) return lo;
  double v = lo + (hi - lo) * stream.uniform01();
  return v < hi ? v : lo;  // guard against rounding up to hi
}

}  // namespace ewsn::sim
