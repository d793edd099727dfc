#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "ewsn/analytics/csv.hpp"
#include "ewsn/analytics/formulas.hpp"
#include "ewsn/analytics/oracle.hpp"
#include "ewsn/analytics/stats.hpp"
#include "ewsn/analytics/summary.hpp"
#include "ewsn/errors.hpp"
#include "ewsn/sim/rng.hpp"

using namespace ewsn;
using namespace ewsn::analytics;

namespace {

const OracleCheck* find(const OracleReport& r, const std::string& name) {
  for (const auto& c : r.checks())
    if (c.name == name) return &c;
  return nullptr;
}

RunMetrics two_nodes() {
  RunMetrics m;
  m.start = seconds(60);
  m.end = seconds(160);
  m.dispatched = 1234;
  m.nodes.resize(2);
  m.nodes[0].radio_on = seconds(1);
  m.nodes[1].radio_on = seconds(3);
  m.nodes[0].initiator_successes = 5;
  m.nodes[1].responder_successes = 5;
  return m;
}

}  // namespace

TEST(Formulas, DutyCycleOfFiveMsEveryTwoHundred) {
  EXPECT_DOUBLE_EQ(duty_cycle(millis(5), millis(200)), 0.025);
  EXPECT_DOUBLE_EQ(duty_cycle(seconds(3), seconds(3)), 1.0);
  EXPECT_THROW(duty_cycle(millis(5), SimTime::zero()), ConfigError);
}

TEST(Formulas, BetaExpectation) {
  EXPECT_EQ(beta_rendezvous_expectation(seconds(1), 99), millis(10));
  EXPECT_EQ(beta_rendezvous_expectation(seconds(1), 1), millis(500));
  // unicast waits W/2 on average
  const double gain = 500.0 / beta_rendezvous_expectation(seconds(1), 99).ms();
  EXPECT_DOUBLE_EQ(gain, 50.0);
  EXPECT_THROW(beta_rendezvous_expectation(seconds(1), 0), ConfigError);
}

TEST(Formulas, SofaGain) {
  EXPECT_DOUBLE_EQ(sofa_gain(99), 0.02);
  EXPECT_DOUBLE_EQ(sofa_gain(1), 1.0);
  EXPECT_DOUBLE_EQ(sofa_gain(3), 0.5);
  EXPECT_THROW(sofa_gain(0), ConfigError);
}

TEST(Oracle, RelativePassRule) {
  OracleReport r;
  EXPECT_TRUE(r.relative("a", 100, 119.9, 0.2).pass);
  EXPECT_FALSE(r.relative("b", 100, 120.1, 0.2).pass);
  EXPECT_TRUE(r.relative("c", -100, -80.5, 0.2).pass);
  // predicted 0 falls back to the absolute floor
  EXPECT_TRUE(r.relative("d", 0, 0.05, 0.5, 0.1).pass);
  EXPECT_FALSE(r.relative("e", 0, 0.06, 0.5, 0.1).pass);
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.failures().size(), 2u);
}

TEST(Oracle, PassRuleProperty) {
  sim::RngStream rng(7, 0, sim::StreamPurpose::experiment);
  OracleReport r;
  for (int i = 0; i < 5000; ++i) {
    const double p = rng.uniform(-10, 10);
    const double m = rng.uniform(-10, 10);
    const double tol = rng.uniform(0, 1);
    const bool expect = std::abs(m - p) <= tol * std::max(std::abs(p), OracleReport::kEpsAbs);
    EXPECT_EQ(r.relative("x", p, m, tol).pass, expect);
  }
}

TEST(Oracle, InfoAndSkippedNeverFail) {
  OracleReport r;
  r.info("i", 1, 99);
  r.skip("s", "no data");
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.any_skipped());
  r.require("fact", false);
  EXPECT_FALSE(r.all_pass());
  OracleReport outer;
  outer.merge(r, "inner: ");
  ASSERT_EQ(outer.checks().size(), 3u);
  EXPECT_EQ(outer.checks()[2].name, "inner: fact");
}

TEST(Stats, Quartiles) {
  auto p = percentiles({4, 1, 3, 2, 5});
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->min, 1);
  EXPECT_DOUBLE_EQ(p->p25, 2);
  EXPECT_DOUBLE_EQ(p->p50, 3);
  EXPECT_DOUBLE_EQ(p->p75, 4);
  EXPECT_DOUBLE_EQ(p->max, 5);
  EXPECT_DOUBLE_EQ(*quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(*quantile({10, 20}, 0.25), 12.5);
  EXPECT_FALSE(percentiles({}));
  EXPECT_FALSE(mean({}));
  EXPECT_FALSE(median({}));
}

TEST(Summary, ZeroPacketsSkipsDeliveryRatio) {
  RunLogs logs;
  logs.metrics = two_nodes();
  auto s = summarize_run(logs);
  const auto* c = find(s.report, "delivery ratio");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->kind, CheckKind::skipped);
  EXPECT_TRUE(s.report.all_pass());
  EXPECT_FALSE(s.metrics.delivery_ratio());
}

TEST(Summary, MissingStreamsAreSkipped) {
  auto s = summarize_run(RunLogs{});
  EXPECT_TRUE(s.report.any_skipped());
  EXPECT_TRUE(s.report.all_pass());
}

TEST(Summary, AccountingIdentity) {
  RunLogs logs;
  auto m = two_nodes();
  m.generated = 10;
  m.delivered = 6;
  m.dropped = 1;
  m.in_queue_at_end = 2;
  m.lost = 1;
  logs.metrics = m;
  EXPECT_TRUE(find(summarize_run(logs).report, "accounting identity")->pass);
  logs.metrics->lost = 0;
  EXPECT_FALSE(find(summarize_run(logs).report, "accounting identity")->pass);
}

TEST(Summary, ExchangeSymmetry) {
  RunLogs logs;
  logs.metrics = two_nodes();
  EXPECT_TRUE(find(summarize_run(logs).report, "exchange symmetry")->pass);
  logs.metrics->nodes[1].responder_successes = 4;
  EXPECT_FALSE(find(summarize_run(logs).report, "exchange symmetry")->pass);
}

TEST(Summary, MassDeliveryRatio) {
  auto m = two_nodes();
  m.nodes[0].disagreements = 2;
  // an exchange counts once, on the initiator side: 5 successes, 2 disagreements
  EXPECT_EQ(m.mass_successes(), 5u);
  EXPECT_DOUBLE_EQ(*m.mass_delivery_ratio(), 5.0 / 7.0);
}

TEST(Summary, RendezvousOracleFromBetaSamples) {
  // exact Beta(1, N) first order statistics: the oracle must accept them
  sim::RngStream rng(3, 0, sim::StreamPurpose::experiment);
  RendezvousLog log{seconds(1), 50, {}};
  for (int i = 0; i < 20000; ++i) {
    double first = 1e6;
    for (int k = 0; k < 50; ++k) first = std::min(first, rng.uniform(0, 1e6));
    log.samples_us.push_back(first);
  }
  OracleReport r;
  check_rendezvous(log, r);
  EXPECT_TRUE(r.all_pass());
  // and reject a 2x bias
  for (auto& v : log.samples_us) v *= 2;
  OracleReport bad;
  check_rendezvous(log, bad);
  EXPECT_FALSE(bad.all_pass());
}

TEST(Summary, EstimatorBiasNearNinePercent) {
  EstimateLog log;
  log.neighbours = 100;
  log.t_w = seconds(1);
  log.epsilon = millis(1);
  log.relative_errors.assign(200, -0.09);
  OracleReport r;
  check_estimates(log, r);
  EXPECT_TRUE(r.all_pass());
  log.relative_errors.assign(200, -0.14);
  OracleReport off;
  check_estimates(log, off);
  EXPECT_FALSE(off.all_pass());
}

TEST(Summary, GradientMonotonicity) {
  GradientLog g{0.15, 3, {2.0, 1.2, 0.72}};
  OracleReport r;
  check_gradient(g, r);
  EXPECT_TRUE(r.all_pass());
  g.median_omega_by_hop = {2.0, 2.5, 1.0};
  OracleReport bad;
  check_gradient(g, bad);
  EXPECT_FALSE(bad.all_pass());
}

TEST(Csv, SummaryGoldenFile) {
  RunSummary s;
  s.metrics = two_nodes();
  s.duty_cycle = percentiles({0.01, 0.03});
  s.report.require("ok", true);
  std::ostringstream os;
  write_summary_csv(os, s);
  const std::string expect =
      "measured_s,nodes,events,mean_duty_cycle,"
      "dc_min,dc_p25,dc_p50,dc_p75,dc_max,"
      "global_exchange_rate,mean_exchange_rate,mass_successes,disagreements,mass_delivery_ratio,"
      "generated,delivered,dropped,in_queue_at_end,lost,duplicates,delivery_ratio,"
      "latency_min_s,latency_p25_s,latency_p50_s,latency_p75_s,latency_max_s,"
      "hops_min,hops_p25,hops_p50,hops_p75,hops_max,oracle_pass\n"
      "100,2,1234,0.02,0.01,0.015,0.02,0.025,0.03,0.05,0.05,5,0,1,0,0,0,0,0,0,,,,,,,,,,,,1\n";
  EXPECT_EQ(os.str(), expect);
}

TEST(Csv, OracleRowsAndQuoting) {
  OracleReport r;
  r.relative("mean, us", 10, 11, 0.2);
  r.skip("gone", "said \"no\"");
  std::ostringstream os;
  write_oracle_csv(os, r);
  EXPECT_EQ(os.str(),
            "name,kind,predicted,measured,tolerance,pass,note\n"
            "\"mean, us\",relative,10,11,0.2,1,\n"
            "gone,skipped,0,0,0,skipped,\"said \"\"no\"\"\"\n");
}

TEST(Csv, NodesHeaderIsStable) {
  std::ostringstream os;
  write_nodes_csv(os, two_nodes());
  std::string first;
  std::istringstream is(os.str());
  std::getline(is, first);
  EXPECT_EQ(first,
            "node,radio_on_us,duty_cycle,wakeups,skipped_wakeups,strobes,initiator_successes,"
            "responder_successes,negative_agreements,disagreements,aborted,generated,forwarded,"
            "dropped,always_on");
  std::string row;
  std::getline(is, row);
  EXPECT_EQ(row, "0,1000000,0.01,0,0,0,5,0,0,0,0,0,0,0,0");
}
