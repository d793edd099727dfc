#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "ewsn/analytics/formulas.hpp"
#include "ewsn/errors.hpp"
#include "ewsn/radio/topology.hpp"
#include "ewsn/sofa/config.hpp"
#include "ewsn/sofa/gossip.hpp"
#include "ewsn/sofa/network.hpp"

using namespace ewsn;
using namespace ewsn::sofa;
using radio::Topology;

namespace {

double mean_naive_ms(const SofaNetwork& net) {
  double sum = 0;
  int n = 0;
  for (const auto& e : net.exchanges()) {
    if (e.result != ExchangeResult::success) continue;
    sum += e.t_rendezvous_naive.ms();
    ++n;
  }
  return n ? sum / n : 0.0;
}

}  // namespace

TEST(Wakeup, IntervalsStayInsideJitterBounds) {
  sim::RngStream rng(1, 0, sim::StreamPurpose::wakeup);
  const SimTime W = seconds(1);
  SimTime t;
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const SimTime next = next_wakeup_time(t, W, rng);
    const SimTime d = next - t;
    ASSERT_GE(d, millis(500));
    ASSERT_LT(d, millis(1500));
    sum += d.seconds();
    t = next;
  }
  EXPECT_NEAR(sum / n, 1.0, 0.005);
}

TEST(Wakeup, NoJitterIsExact) {
  sim::RngStream rng(1, 0, sim::StreamPurpose::wakeup);
  EXPECT_EQ(next_wakeup_time(seconds(3), seconds(1), rng, false), seconds(4));
}

TEST(MacConfig, RejectsBadValues) {
  MacConfig c;
  EXPECT_NO_THROW(c.validate());
  c.listen = millis(2);  // shorter than one beacon period
  EXPECT_THROW(c.validate(), ConfigError);
  c = MacConfig{};
  c.ack_contention = AckContention::retransmit;
  c.retransmit_p = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Gossip, MergeRules) {
  auto s = gossip_merge(10.0, 20.0, ExchangeResult::success);
  EXPECT_DOUBLE_EQ(s.a, 15);
  EXPECT_DOUBLE_EQ(s.b, 15);
  auto n = gossip_merge(10.0, 20.0, ExchangeResult::negative_agreement);
  EXPECT_DOUBLE_EQ(n.a, 10);
  EXPECT_DOUBLE_EQ(n.b, 20);
  auto d = gossip_merge(10.0, 20.0, ExchangeResult::disagreement);
  EXPECT_DOUBLE_EQ(d.a, 10);
  EXPECT_DOUBLE_EQ(d.b, 15);
  EXPECT_DOUBLE_EQ(d.a + d.b, 25);
}

TEST(Gossip, IntegerMergeConservesOddSums) {
  for (std::int64_t a = -5; a <= 5; ++a)
    for (std::int64_t b = -5; b <= 5; ++b) {
      auto [x, y] = gossip_merge(a, b, ExchangeResult::success);
      EXPECT_EQ(x + y, a + b);
      EXPECT_LE(std::abs(x - y), 1);
    }
}

TEST(SofaNetwork, IdleNodeSitsAtTheDutyCycleFloor) {
  auto topo = Topology::clique(1);
  SofaOptions opt;
  opt.auto_traffic = false;
  opt.warmup = seconds(10);
  SofaNetwork net(opt, topo, 1);
  net.start();
  auto m = net.run_until(seconds(310));
  EXPECT_NEAR(m.duty_cycle(0), 0.01, 0.0005);
}

TEST(SofaNetwork, DutyCycleFloorAndExchangeSymmetry) {
  auto topo = Topology::clique(10);
  SofaOptions opt;
  opt.warmup = seconds(10);
  SofaNetwork net(opt, topo, 2);
  net.start();
  auto m = net.run_until(seconds(200));
  std::uint64_t init = 0, resp = 0;
  for (NodeId i = 0; i < 10; ++i) {
    EXPECT_GE(m.duty_cycle(i), 0.01 - 1e-3) << "node " << i;
    init += m.nodes[i].initiator_successes;
    resp += m.nodes[i].responder_successes;
  }
  EXPECT_GT(init, 0u);
  EXPECT_EQ(init, resp);
}

TEST(SofaNetwork, BeaconHeardTurnsNodeIntoResponder) {
  // one neighbour asleep until 400 ms: the rendezvous is forced by its schedule
  auto topo = Topology::clique(2);
  SofaOptions opt;
  opt.auto_wakeups = false;
  opt.auto_traffic = false;
  opt.warmup = SimTime::zero();
  SofaNetwork net(opt, topo, 3);
  net.start();
  net.set_pending(0, true);
  net.schedule_wakeup(0, SimTime::zero());
  net.schedule_wakeup(1, millis(400));
  net.run_until(seconds(2));
  ASSERT_EQ(net.exchanges().size(), 1u);
  const auto& e = net.exchanges()[0];
  EXPECT_EQ(e.initiator, 0u);
  EXPECT_EQ(e.responder, 1u);
  EXPECT_EQ(e.result, ExchangeResult::success);
  // first beacon goes out after the 10 ms listen; the ack decodes shortly after 400 ms
  EXPECT_GT(e.t_rendezvous_naive, millis(385));
  EXPECT_LT(e.t_rendezvous_naive, millis(400));
}

TEST(SofaNetwork, MassIsConservedWithoutDisagreements) {
  auto topo = Topology::clique(12);
  SofaOptions opt;
  opt.warmup = SimTime::zero();
  opt.faults.data_loss = 0.2;  // negative agreements only
  SofaNetwork net(opt, topo, 4);
  net.start();
  const auto before = net.total_mass();
  auto m = net.run_until(seconds(300));
  EXPECT_EQ(m.disagreements(), 0u);
  EXPECT_GT(m.mass_successes(), 100u);
  bool negative = false;
  for (const auto& e : net.exchanges()) negative |= e.result == ExchangeResult::negative_agreement;
  EXPECT_TRUE(negative);
  EXPECT_EQ(net.total_mass(), before);
}

TEST(SofaNetwork, DisagreementsOnlyFromFinalAckLoss) {
  auto topo = Topology::clique(12);
  SofaOptions opt;
  opt.warmup = SimTime::zero();
  opt.faults.final_ack_loss = 0.2;
  SofaNetwork net(opt, topo, 5);
  net.start();
  const auto before = net.total_mass();
  auto m = net.run_until(seconds(300));
  EXPECT_GT(m.disagreements(), 0u);
  EXPECT_NE(net.total_mass(), before);
  const double ratio = *m.mass_delivery_ratio();
  EXPECT_NEAR(ratio, 0.8, 0.05);
}

TEST(SofaNetwork, PeerSamplingIsUniform) {
  const NodeId n = 10;
  auto topo = Topology::clique(n);
  SofaOptions opt;
  opt.warmup = SimTime::zero();
  SofaNetwork net(opt, topo, 6);
  net.start();
  net.run_until(seconds(1500));
  const auto& sel = net.selected_as_responder();
  const double total = std::accumulate(sel.begin(), sel.end(), 0.0);
  ASSERT_GT(total, 1000);
  const double expect = total / n;
  double chi2 = 0;
  for (auto c : sel) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 21.666);  // 9 degrees of freedom, 1%
}

TEST(SofaNetwork, CliqueRendezvousFollowsBetaModel) {
  auto topo = Topology::clique(21);
  SofaOptions opt;
  opt.warmup = seconds(10);
  opt.estimator = true;
  SofaNetwork net(opt, topo, 7);
  net.start();
  net.run_until(seconds(300));
  double sum = 0;
  int k = 0;
  for (const auto& e : net.exchanges())
    if (e.corrected) {
      sum += e.corrected->ms();
      ++k;
    }
  ASSERT_GT(k, 500);
  const double model = analytics::beta_rendezvous_expectation(seconds(1), 20).ms();
  EXPECT_NEAR(sum / k, model, 0.2 * model);
}

namespace {

// Node 0 sends to node 1 every T; node 1 never sends, so no role switches.
double one_way_lpl_mean_ms(SimTime W, SimTime T, double run_s, std::uint64_t seed) {
  auto topo = Topology::clique(2);
  SofaOptions opt;
  opt.mac.mode = MacMode::lpl_unicast;
  opt.mac.W = W;
  opt.mac.T = T;
  opt.auto_traffic = false;
  opt.warmup = seconds(10);
  SofaNetwork net(opt, topo, seed);
  std::function<void()> tick = [&] {
    net.set_pending(0, true);
    net.engine().schedule_in(T, 0, sim::EventKind::app_send, tick);
  };
  net.engine().schedule(seconds(1), 0, sim::EventKind::app_send, tick);
  net.start();
  net.run_until(seconds(run_s));
  return mean_naive_ms(net);
}

}  // namespace

// Expected unicast wait. Wake-ups are a renewal process with U[0.5W, 1.5W)
// gaps, so the residual R from a random instant has mean E[X^2]/2E[X] =
// 13W/24 and density 1/W below W/2. The sender listens L before its first
// beacon, so a receiver that woke inside that window is caught at once:
// E[max(0, R - L)] = 13W/24 - L + L^2/2W. Decoding adds half a beacon gap
// plus a beacon and an ack.
double unicast_wait_ms(double W, double L) {
  return 13.0 * W / 24.0 - L + L * L / (2 * W) + 1.25 + 1.0 + 1.1;
}

TEST(LplUnicast, SinglePairWaitsHalfAPeriod) {
  const double mean = one_way_lpl_mean_ms(seconds(1), seconds(2), 3000, 8);
  EXPECT_NEAR(mean, unicast_wait_ms(1000, 10), 0.05 * unicast_wait_ms(1000, 10));
  EXPECT_NEAR(mean, 500, 0.1 * 500);
}

TEST(LplUnicast, ShortPeriodScales) {
  const double mean = one_way_lpl_mean_ms(millis(125), millis(500), 600, 9);
  EXPECT_NEAR(mean, unicast_wait_ms(125, 10), 0.05 * unicast_wait_ms(125, 10));
  EXPECT_NEAR(mean, 62.5, 0.1 * 62.5);
}

TEST(LplUnicast, FiveSendersSaturateTheChannel) {
  // five pairs of senders each wanting W/2 of airtime every 2 s
  auto topo = Topology::clique(6);
  SofaOptions opt;
  opt.mac.mode = MacMode::lpl_unicast;
  opt.warmup = seconds(10);
  SofaNetwork net(opt, topo, 10);
  net.start();
  auto m = net.run_until(seconds(300));
  std::uint64_t strobes = 0, ok = 0;
  for (const auto& n : m.nodes) {
    strobes += n.strobes;
    ok += n.initiator_successes;
  }
  // far fewer completions than the 6 per 2 s that are offered
  EXPECT_LT(static_cast<double>(ok), 0.5 * 6 * 290 / 2.0);
  EXPECT_GT(strobes, 0u);
}
