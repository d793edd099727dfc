#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ewsn/analytics/oracle.hpp"
#include "ewsn/analytics/run_metrics.hpp"
#include "ewsn/analytics/stats.hpp"
#include "ewsn/sim/time.hpp"

namespace ewsn::analytics {

// Plain-data log streams a run can hand to summarize_run. Every stream is
// optional; a missing one turns its oracle checks into "skipped".

struct RendezvousLog {
  SimTime W;
  int neighbours = 0;               // N in a clique of N + 1
  std::vector<double> samples_us;   // corrected rendezvous times
};

struct CollisionLog {
  int neighbours = 0;
  SimTime t_b;
  SimTime t_w;
  std::uint64_t trials = 0;
  std::uint64_t collisions = 0;
};

struct EstimateLog {
  int neighbours = 0;
  SimTime t_w;
  SimTime epsilon;                       // injected uncorrected delay
  std::vector<double> relative_errors;   // signed, (n_hat - n) / n
  std::optional<double> control_bias;    // mean error of an eps = 0 twin run
};

struct GradientLog {
  double dc_max = 0.0;
  int forwarders = 0;
  std::vector<double> median_omega_by_hop;  // [0] = one hop from the sink
};

struct RunLogs {
  std::optional<RunMetrics> metrics;
  std::optional<RendezvousLog> rendezvous;
  std::optional<CollisionLog> collisions;
  std::optional<EstimateLog> estimates;
  std::optional<GradientLog> gradient;
};

struct RunSummary {
  RunMetrics metrics;
  std::optional<Percentiles> duty_cycle;
  std::optional<Percentiles> latency_s;
  std::optional<Percentiles> hops;
  OracleReport report;
};

// Tolerances used by the oracle checks.
inline constexpr double kRendezvousTolerance = 0.20;   // relative
inline constexpr double kCollisionTolerance = 0.03;    // absolute
inline constexpr double kBiasTolerance = 0.02;         // absolute
inline constexpr double kEstimateErrorBound = 0.15;    // median |error|
inline constexpr double kGradientRatioTolerance = 0.30;

RunSummary summarize_run(const RunLogs& logs);

// The per-stream checks summarize_run applies, for callers that only have one stream.
void check_rendezvous(const RendezvousLog& log, OracleReport& r);
void check_collisions(const CollisionLog& log, OracleReport& r);
void check_estimates(const EstimateLog& log, OracleReport& r);
void check_gradient(const GradientLog& log, OracleReport& r);

}  // namespace ewsn::analytics
