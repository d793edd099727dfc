#include "ewsn/analytics/summary.hpp"

#include <cmath>

#include "ewsn/analytics/formulas.hpp"
#include "ewsn/estreme/model.hpp"

namespace ewsn::analytics {

namespace {

void metric_checks(const RunMetrics& m, OracleReport& r) {
  bool dc_ok = true;
  for (NodeId i = 0; i < m.nodes.size(); ++i) {
    const double dc = static_cast<double>(m.nodes[i].radio_on.us()) /
                      static_cast<double>(std::max<std::int64_t>(1, m.measured().us()));
    if (dc < 0.0 || dc > 1.0 + 1e-9) dc_ok = false;
  }
  r.require("duty cycle within [0,1]", dc_ok);

  std::uint64_t init = 0, resp = 0;
  for (const auto& n : m.nodes) {
    init += n.initiator_successes;
    resp += n.responder_successes;
  }
  r.require("exchange symmetry", init == resp);

  if (auto mdr = m.mass_delivery_ratio())
    r.info("mass delivery ratio", 1.0, *mdr);
  else
    r.skip("mass delivery ratio", "no exchanges");

  if (m.generated == 0) {
    r.skip("delivery ratio", "no packets generated");
    return;
  }
  r.info("delivery ratio", 1.0, *m.delivery_ratio());
  const auto accounted = m.delivered + m.dropped + m.in_queue_at_end + m.lost;
  r.require("accounting identity", accounted == m.generated);
}

}  // namespace

void check_rendezvous(const RendezvousLog& log, OracleReport& r) {
  const auto mu = mean(log.samples_us);
  if (!mu || log.neighbours < 1) {
    r.skip("rendezvous", "no rendezvous samples");
    return;
  }
  const double expect = static_cast<double>(beta_rendezvous_expectation(log.W, log.neighbours).us());
  r.relative("mean rendezvous (us)", expect, *mu, kRendezvousTolerance);
}

void check_collisions(const CollisionLog& log, OracleReport& r) {
  if (log.trials == 0) {
    r.skip("collision rate", "no strobe trials");
    return;
  }
  const double p = estreme::collision_probability(log.neighbours, log.t_b, log.t_w);
  r.absolute("first-wakeup collision rate", p,
             static_cast<double>(log.collisions) / static_cast<double>(log.trials), kCollisionTolerance);
}

void check_estimates(const EstimateLog& log, OracleReport& r) {
  if (log.relative_errors.empty()) {
    r.skip("estimator", "no estimates");
    return;
  }
  std::vector<double> abs_err;
  for (double e : log.relative_errors) abs_err.push_back(std::fabs(e));
  const double bias = *mean(log.relative_errors);
  if (log.epsilon == SimTime::zero()) {
    r.at_most("estimator median |error|", kEstimateErrorBound, *median(abs_err));
    r.info("estimator bias", 0.0, bias);
    return;
  }
  const double expect = estreme::expected_error_bound(log.epsilon, log.neighbours, log.t_w).exact;
  if (log.control_bias) {
    r.absolute("bias caused by delay error", expect, bias - *log.control_bias, kBiasTolerance);
    r.info("absolute bias", expect, bias);
  } else {
    r.absolute("estimator bias", expect, bias, kBiasTolerance);
  }
  r.require("bias sign negative", bias < (log.control_bias ? *log.control_bias : 0.0));
}

void check_gradient(const GradientLog& log, OracleReport& r) {
  const auto& w = log.median_omega_by_hop;
  if (w.size() < 2) {
    r.skip("gradient", "fewer than two hop layers");
    return;
  }
  bool mono = true;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] > w[i - 1]) mono = false;
  r.require("median frequency non-increasing with hops", mono);
  const double model = log.dc_max * (log.forwarders + 1);
  for (std::size_t i = 1; i < w.size(); ++i)
    r.relative("frequency ratio hop " + std::to_string(i + 1) + "/" + std::to_string(i), model,
               w[i - 1] > 0 ? w[i] / w[i - 1] : NAN, kGradientRatioTolerance);
}

RunSummary summarize_run(const RunLogs& logs) {
  RunSummary s;
  if (logs.metrics) {
    s.metrics = *logs.metrics;
    std::vector<double> dc, lat, hops;
    for (NodeId i = 0; i < s.metrics.nodes.size(); ++i) dc.push_back(s.metrics.duty_cycle(i));
    for (const auto& p : s.metrics.packets) {
      lat.push_back(p.latency.seconds());
      hops.push_back(static_cast<double>(p.hops));
    }
    s.duty_cycle = percentiles(dc);
    s.latency_s = percentiles(lat);
    s.hops = percentiles(hops);
    metric_checks(s.metrics, s.report);
  } else {
    s.report.skip("metrics", "metrics stream missing");
  }
  if (logs.rendezvous) check_rendezvous(*logs.rendezvous, s.report);
  if (logs.collisions) check_collisions(*logs.collisions, s.report);
  if (logs.estimates) check_estimates(*logs.estimates, s.report);
  if (logs.gradient) check_gradient(*logs.gradient, s.report);
  return s;
}

}  // namespace ewsn::analytics
