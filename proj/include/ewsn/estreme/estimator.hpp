#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "ewsn/sim/time.hpp"

namespace ewsn::estreme {

struct EstimatorConfig {
  std::size_t window = 50;
  std::size_t neighbor_window = 0;  // 0: same as window
  SimTime t_w = SimTime::from_s(1);
  double alpha = 1.0;
  // airtime of the ack that stops the initiator's timer
  SimTime delta4 = SimTime::from_us(1100);
  void validate() const;
};

struct RendezvousSample {
  SimTime naive;
  SimTime piggybacked_delay;
  SimTime corrected;
};

// corrected = naive - piggy - delta4; nullopt when that is not positive.
std::optional<RendezvousSample> corrected_sample(SimTime naive, SimTime piggy, SimTime delta4);

// n_hat = t_w / mean - 1 (first order statistic, k = 1)
double cardinality_from_mean(double t_w_us, double mean_us);

class EstimatorState {
 public:
  explicit EstimatorState(EstimatorConfig cfg = {});

  // Builds the corrected sample and appends it; rejected samples are only counted.
  std::optional<RendezvousSample> corrected_rendezvous_sample(SimTime naive, SimTime piggy);
  void add_corrected(SimTime corrected);
  // a sample discarded by the caller (e.g. responder was awake before the strobe)
  void reject() { ++rejected_; }
  void add_neighbor_mean(double mean_us);

  std::optional<double> window_mean_us() const;
  std::optional<double> t_estimate() const;
  std::optional<double> s_estimate() const;
  std::optional<double> combined_estimate() const;

  std::size_t samples() const { return window_.size(); }
  std::size_t neighbor_samples() const { return neighbors_.size(); }
  std::size_t rejected() const { return rejected_; }
  const EstimatorConfig& config() const { return cfg_; }

 private:
  EstimatorConfig cfg_;
  std::deque<std::int64_t> window_;
  std::int64_t window_sum_ = 0;
  std::deque<double> neighbors_;
  std::size_t rejected_ = 0;
};

}  // namespace ewsn::estreme
