#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "ewsn/errors.hpp"
#include "ewsn/harness/topologies.hpp"
#include "ewsn/sim/rng.hpp"
#include "ewsn/staffetta/network.hpp"
#include "ewsn/staffetta/policy.hpp"
#include "ewsn/staffetta/routing.hpp"

using namespace ewsn;
using namespace ewsn::staffetta;

TEST(Policy, MovingAverageOfTwenty) {
  WakeupPolicy p;
  for (int i = 0; i < 20; ++i) p.update_forwarding_delay(millis(50));
  EXPECT_EQ(*p.forwarding_delay(), millis(50));
  EXPECT_DOUBLE_EQ(p.frequency(), 1.5);
  for (int i = 0; i < 19; ++i) p.update_forwarding_delay(millis(50));
  p.update_forwarding_delay(millis(70));
  EXPECT_EQ(*p.forwarding_delay(), millis(51));
  EXPECT_EQ(p.observations(), 20u);
}

TEST(Policy, BootstrapsAtOneHertz) {
  WakeupPolicy p;
  EXPECT_FALSE(p.forwarding_delay());
  EXPECT_DOUBLE_EQ(p.frequency(), 1.0);
}

TEST(Policy, FrequencyLawAndFloor) {
  EXPECT_DOUBLE_EQ(compute_wakeup_frequency(0.075, millis(50), 0.1), 1.5);
  EXPECT_DOUBLE_EQ(compute_wakeup_frequency(0.06, seconds(2), 0.1), 0.1);
  EXPECT_NEAR(compute_wakeup_frequency(0.075, millis(6), 0.1), 12.5, 1e-9);
}

TEST(Policy, FrequencyTimesDelayIsTheBudget) {
  sim::RngStream rng(21, 0, sim::StreamPurpose::experiment);
  PolicyConfig cfg;
  cfg.dc_max = 0.06;
  WakeupPolicy p(cfg);
  std::deque<double> last;
  for (int i = 0; i < 2000; ++i) {
    const auto us = std::llround(rng.uniform(1e3, 1.2e6));
    p.update_forwarding_delay(micros(us));
    last.push_back(us * 1e-6);
    if (last.size() > cfg.sma_window) last.pop_front();
    const double sma = std::accumulate(last.begin(), last.end(), 0.0) / last.size();
    if (cfg.dc_max / sma < cfg.omega_min) {
      EXPECT_TRUE(p.floored());
      EXPECT_DOUBLE_EQ(p.frequency(), cfg.omega_min);
    } else {
      EXPECT_NEAR(p.frequency() * sma, cfg.dc_max, 1e-12);
    }
  }
}

TEST(Policy, BetaRendezvousSmaMatchesModel) {
  // n = 3 forwarders at 5 Hz: rendezvous ~ 0.2 s * Beta(1, 3), mean 50 ms
  sim::RngStream rng(22, 0, sim::StreamPurpose::experiment);
  const double d_tx = 3e3;
  double acc = 0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) {
    WakeupPolicy p;
    for (int i = 0; i < 20; ++i) {
      const double first = 0.2e6 * (1.0 - std::pow(rng.uniform01(), 1.0 / 3));
      p.update_forwarding_delay(micros(std::llround(first + d_tx)));
    }
    acc += p.forwarding_delay()->us();
  }
  EXPECT_NEAR(acc / reps, 50e3 + d_tx, 0.15 * (50e3 + d_tx));
}

TEST(Policy, RejectsBadBudget) {
  PolicyConfig c;
  c.dc_max = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.dc_max = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Routing, AcceptRules) {
  EXPECT_TRUE(accept_forwarder(MetricKind::edc, 0.9, 0.3));
  EXPECT_FALSE(accept_forwarder(MetricKind::edc, 0.3, 0.3));
  EXPECT_FALSE(accept_forwarder(MetricKind::edc, 0.9, 0.3, 0.7));
  EXPECT_FALSE(accept_forwarder(MetricKind::qb, 4, 4));
  EXPECT_TRUE(accept_forwarder(MetricKind::qb, 4, 3));
  EXPECT_TRUE(accept_forwarder(MetricKind::rw, 0, 100));
  EXPECT_TRUE(accept_forwarder(MetricKind::direct, 2, 5));
  EXPECT_FALSE(accept_forwarder(MetricKind::direct, 5, 5));
}

TEST(Routing, ForwardingProbability) {
  auto p = forwarding_probability({11, 11, 11, 27});
  ASSERT_TRUE(p);
  EXPECT_NEAR((*p)[0], 0.18333, 1e-5);
  EXPECT_NEAR((*p)[3], 0.45, 1e-12);
  auto eq = forwarding_probability({3, 3, 3, 3});
  for (double v : *eq) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_DOUBLE_EQ((*forwarding_probability({7}))[0], 1.0);
  EXPECT_FALSE(forwarding_probability({}));
}

TEST(Routing, ForwardingProbabilitySumsToOne) {
  sim::RngStream rng(23, 0, sim::StreamPurpose::experiment);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> w(1 + rng.index(40));
    for (auto& x : w) x = rng.uniform(0.1, 50);
    auto p = forwarding_probability(w);
    EXPECT_NEAR(std::accumulate(p->begin(), p->end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Routing, GradientModel) {
  EXPECT_DOUBLE_EQ(gradient_model_frequency(1, 3, 0.15, 4.0), 4.0);
  EXPECT_NEAR(gradient_model_frequency(2, 3, 0.15, 4.0) / 4.0, 0.6, 1e-12);
  EXPECT_NEAR(gradient_model_frequency(4, 3, 0.15, 1.0), 0.216, 1e-12);
}

namespace {

CollectionOptions chain_options() {
  CollectionOptions opt;
  opt.policy.dc_max = 0.075;
  opt.gen_period = seconds(10);
  opt.warmup = seconds(60);
  return opt;
}

}  // namespace

TEST(Collection, BudgetHeldWhereTheFloorDoesNotBind) {
  auto topo = harness::chain_of_cliques(4, 3);
  CollectionNetwork net(chain_options(), topo, 31);
  net.start();
  auto m = net.run_until(seconds(400));
  int checked = 0;
  for (NodeId n = 1; n < topo.size(); ++n) {
    if (net.policy(n).floored()) continue;
    EXPECT_LE(m.duty_cycle(n), 0.075 + 0.01) << "node " << n;
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Collection, LatencyIsSumOfHopDelaysAndHopsCount) {
  auto topo = harness::chain_of_cliques(4, 3);
  CollectionNetwork net(chain_options(), topo, 32);
  net.start();
  auto m = net.run_until(seconds(400));
  ASSERT_GT(m.packets.size(), 50u);
  std::map<std::uint64_t, std::uint32_t> forwards;
  for (const auto& e : net.packet_log())
    if (e.event == PacketEvent::forwarded) ++forwards[(std::uint64_t{e.origin} << 32) | e.seq];
  for (const auto& p : m.packets) {
    EXPECT_LE(std::abs((p.latency - p.hop_delay_sum).us()), 1);
    EXPECT_EQ(p.hops, forwards[(std::uint64_t{p.origin} << 32) | p.seq]);
    // at least as many hops as the layer distance
    EXPECT_GE(p.hops, static_cast<std::uint32_t>(harness::chain_layer(p.origin, 3)));
  }
}

TEST(Collection, AccountingIdentity) {
  auto topo = harness::chain_of_cliques(3, 3);
  auto opt = chain_options();
  opt.faults.select_loss = 0.1;
  CollectionNetwork net(opt, topo, 33);
  net.start();
  auto m = net.run_until(seconds(300));
  EXPECT_GT(m.generated, 0u);
  EXPECT_EQ(m.generated, m.delivered + m.dropped + m.in_queue_at_end + m.lost);
  EXPECT_GT(m.duplicates, 0u);
}

TEST(Collection, GradientIsNonIncreasingWithHops) {
  auto topo = harness::chain_of_cliques(4, 3);
  CollectionNetwork net(chain_options(), topo, 34);
  net.start();
  net.run_until(seconds(600));
  std::vector<double> layer(5, 0.0);
  for (NodeId n = 1; n < topo.size(); ++n) layer[harness::chain_layer(n, 3)] += net.view(n).omega / 3;
  for (int h = 2; h <= 4; ++h) EXPECT_LE(layer[h], layer[h - 1] * 1.05) << "hop " << h;
}

TEST(Collection, DirectOnlyHandsToFasterNodes) {
  auto topo = harness::chain_of_cliques(4, 3);
  auto opt = chain_options();
  opt.metric = MetricKind::direct;
  CollectionNetwork net(opt, topo, 35);
  int acks = 0, violations = 0;
  // An ack carries the responder's frequency at decision time. The holder's own
  // frequency only moves once the handoff completes.
  net.medium().set_drop_filter([&](NodeId listener, const radio::Transmission<CFrame>& tx) {
    if (tx.frame.kind == CFrameKind::ack && listener == tx.frame.dst) {
      ++acks;
      if (!(tx.frame.metric > net.routing_metric(tx.frame.dst))) ++violations;
    }
    return false;
  });
  net.start();
  net.run_until(seconds(300));
  EXPECT_GT(acks, 20);
  EXPECT_EQ(violations, 0);
}

TEST(Collection, SinkIsAlwaysOn) {
  auto topo = harness::chain_of_cliques(2, 3);
  CollectionNetwork net(chain_options(), topo, 36);
  net.start();
  auto m = net.run_until(seconds(120));
  EXPECT_TRUE(std::isinf(net.view(0).omega));
  EXPECT_NEAR(m.duty_cycle(0), 1.0, 1e-9);
}
