#include "ewsn/estreme/estimator.hpp"

#include <numeric>

#include "ewsn/errors.hpp"

namespace ewsn::estreme {

void EstimatorConfig::validate() const {
  if (window == 0) throw ConfigError("estimator window must be >= 1");
  if (t_w <= SimTime::zero()) throw ConfigError("t_w must be positive");
  if (alpha < 0 || alpha > 1) throw ConfigError("alpha must be in [0,1]");
  if (delta4 < SimTime::zero()) throw ConfigError("delta4 must be >= 0");
}

std::optional<RendezvousSample> corrected_sample(SimTime naive, SimTime piggy, SimTime delta4) {
  const SimTime c = naive - piggy - delta4;
  if (c <= SimTime::zero()) return std::nullopt;
  return RendezvousSample{naive, piggy, c};
}

double cardinality_from_mean(double t_w_us, double mean_us) { return t_w_us / mean_us - 1.0; }

EstimatorState::EstimatorState(EstimatorConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.neighbor_window == 0) cfg_.neighbor_window = cfg_.window;
}

std::optional<RendezvousSample> EstimatorState::corrected_rendezvous_sample(SimTime naive, SimTime piggy) {
  auto s = corrected_sample(naive, piggy, cfg_.delta4);
  if (!s) {
    ++rejected_;
    return s;
  }
  add_corrected(s->corrected);
  return s;
}

void EstimatorState::add_corrected(SimTime corrected) {
  if (corrected <= SimTime::zero()) {
    ++rejected_;
    return;
  }
  window_.push_back(corrected.us());
  window_sum_ += corrected.us();
  if (window_.size() > cfg_.window) {
    window_sum_ -= window_.front();
    window_.pop_front();
  }
}

void EstimatorState::add_neighbor_mean(double mean_us) {
  if (!(mean_us > 0)) return;
  neighbors_.push_back(mean_us);
  if (neighbors_.size() > cfg_.neighbor_window) neighbors_.pop_front();
}

std::optional<double> EstimatorState::window_mean_us() const {
  if (window_.empty()) return std::nullopt;
  return static_cast<double>(window_sum_) / static_cast<double>(window_.size());
}

std::optional<double> EstimatorState::t_estimate() const {
  auto m = window_mean_us();
  if (!m) return std::nullopt;
  return cardinality_from_mean(static_cast<double>(cfg_.t_w.us()), *m);
}

std::optional<double> EstimatorState::s_estimate() const {
  if (neighbors_.empty()) return std::nullopt;
  const double m = std::accumulate(neighbors_.begin(), neighbors_.end(), 0.0) / static_cast<double>(neighbors_.size());
  return cardinality_from_mean(static_cast<double>(cfg_.t_w.us()), m);
}

std::optional<double> EstimatorState::combined_estimate() const {
  auto t = t_estimate();
  auto s = s_estimate();
  if (cfg_.alpha >= 1.0) return t;
  if (cfg_.alpha <= 0.0) return s;
  if (t && s) return cfg_.alpha * *t + (1.0 - cfg_.alpha) * *s;
  // only one side available: use it rather than report nothing
  return t ? t : s;
}

}  // namespace ewsn::estreme
