#include "ewsn/staffetta/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ewsn/errors.hpp"

namespace ewsn::staffetta {

void PolicyConfig::validate() const {
  switch (kind) {
    case PolicyKind::fixed:
      if (!(fixed_hz > 0) || !std::isfinite(fixed_hz)) throw ConfigError("fixed wake-up frequency must be > 0");
      break;
    case PolicyKind::staffetta:
      if (!(dc_max > 0 && dc_max < 1)) throw ConfigError("DC_max must be in (0,1)");
      if (!(omega_min > 0)) throw ConfigError("omega_min must be > 0");
      if (!(bootstrap_hz > 0)) throw ConfigError("bootstrap frequency must be > 0");
      break;
    case PolicyKind::always_on:
      break;
  }
  if (sma_window == 0) throw ConfigError("SMA window must be >= 1");
  if (!(drift >= 0 && drift < 1)) throw ConfigError("drift must be in [0,1)");
}

double compute_wakeup_frequency(double dc_max, SimTime delta_f, double omega_min) {
  if (delta_f <= SimTime::zero()) throw ConfigError("forwarding delay must be positive");
  return std::max(omega_min, dc_max / delta_f.seconds());
}

WakeupPolicy::WakeupPolicy(PolicyConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  recompute();
}

void WakeupPolicy::reset() {
  window_.clear();
  sum_ = 0;
  recompute();
}

void WakeupPolicy::update_forwarding_delay(SimTime observed) {
  if (observed <= SimTime::zero()) throw ProtocolError("non-positive forwarding delay");
  window_.push_back(observed.us());
  sum_ += observed.us();
  if (window_.size() > cfg_.sma_window) {
    sum_ -= window_.front();
    window_.pop_front();
  }
  recompute();
}

std::optional<SimTime> WakeupPolicy::forwarding_delay() const {
  if (window_.empty()) return std::nullopt;
  // rounded SMA; the frequency itself uses the exact mean
  const double mean = static_cast<double>(sum_) / static_cast<double>(window_.size());
  return SimTime::from_us(std::llround(mean));
}

void WakeupPolicy::recompute() {
  switch (cfg_.kind) {
    case PolicyKind::always_on:
      omega_ = std::numeric_limits<double>::infinity();
      break;
    case PolicyKind::fixed:
      omega_ = cfg_.fixed_hz;
      break;
    case PolicyKind::staffetta:
      if (window_.empty()) {
        omega_ = cfg_.bootstrap_hz;
      } else {
        const double mean_s = static_cast<double>(sum_) / static_cast<double>(window_.size()) * 1e-6;
        omega_ = std::max(cfg_.omega_min, cfg_.dc_max / mean_s);
      }
      break;
  }
}

bool WakeupPolicy::floored() const {
  return cfg_.kind == PolicyKind::staffetta && !window_.empty() && omega_ <= cfg_.omega_min;
}

SimTime WakeupPolicy::next_interval(sim::RngStream& rng) const {
  if (always_on()) throw ProtocolError("always-on node has no wake-up schedule");
  const double period_us = 1e6 / omega_;
  double us = period_us;
  if (cfg_.kind == PolicyKind::fixed) {
    us = period_us * (0.5 + rng.uniform01());
  } else if (cfg_.drift > 0) {
    us = period_us * (1.0 + cfg_.drift * (2.0 * rng.uniform01() - 1.0));
  }
  return SimTime::from_us(std::max<std::int64_t>(1, std::llround(us)));
}

}  // namespace ewsn::staffetta
