#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace ewsn {

// Virtual time in integer microseconds. Also used for durations, so
// arithmetic may go negative; the engine is what refuses negative instants.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_us(std::int64_t us) { return SimTime(us); }
  static SimTime from_ms(double ms) { return SimTime(std::llround(ms * 1e3)); }
  static SimTime from_s(double s) { return SimTime(std::llround(s * 1e6)); }
  static constexpr SimTime zero() { return SimTime(0); }
  static constexpr SimTime max() {
    return SimTime(std::numeric_limits<std::int64_t>::max());
  }

  constexpr std::int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1e3; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
  constexpr SimTime operator-() const { return SimTime(-us_); }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(us_ * k); }
  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    us_ -= o.us_;
    return *this;
  }

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

constexpr SimTime micros(std::int64_t v) { return SimTime::from_us(v); }
inline SimTime millis(double v) { return SimTime::from_ms(v); }
inline SimTime seconds(double v) { return SimTime::from_s(v); }

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

}  // namespace ewsn
