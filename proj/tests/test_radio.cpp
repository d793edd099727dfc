#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "ewsn/errors.hpp"
#include "ewsn/radio/medium.hpp"
#include "ewsn/radio/mobility.hpp"
#include "ewsn/radio/topology.hpp"

using namespace ewsn;
using radio::Arena;
using radio::Position;
using radio::RxOutcome;
using radio::Topology;

TEST(Topology, CliqueOfHundredHasNinetyNineNeighbours) {
  auto t = Topology::clique(100);
  for (NodeId n : {0u, 17u, 99u}) EXPECT_EQ(t.in_range_neighbors(n).size(), 99u);
  EXPECT_THROW(t.in_range_neighbors(100), ProtocolError);
}

TEST(Topology, SixtyMetresApartWithFiftyMetreRangeAreDisconnected) {
  auto t = Topology::geometric({{10, 10}, {70, 10}}, Arena{100, 100}, 50);
  EXPECT_TRUE(t.in_range_neighbors(0).empty());
  EXPECT_TRUE(t.in_range_neighbors(1).empty());
  t.set_position(1, {50, 10});
  EXPECT_EQ(t.in_range_neighbors(0).size(), 1u);
}

TEST(Topology, DenseArenaMeanDegree) {
  // 450 nodes, 150x150 m, 50 m range. Uniform placement loses ~25% of the
  // disc to the borders; check it against pair sampling instead of pi*r^2.
  sim::RngStream rng(1, 0, sim::StreamPurpose::placement);
  auto t = Topology::random_geometric(450, Arena{150, 150}, 50, rng);
  sim::RngStream pr(2, 0, sim::StreamPurpose::experiment);
  int close = 0;
  const int pairs = 400000;
  for (int i = 0; i < pairs; ++i) {
    Position a{pr.uniform(0, 150), pr.uniform(0, 150)};
    Position b{pr.uniform(0, 150), pr.uniform(0, 150)};
    if (radio::distance(a, b) <= 50) ++close;
  }
  const double oracle = 449.0 * close / pairs;
  EXPECT_NEAR(t.mean_degree(), oracle, 0.05 * oracle);

  // random-waypoint steady state crowds the centre; roughly a third of the
  // network is then in range (~150)
  radio::MobilityConfig cfg;
  cfg.kind = radio::MobilityKind::random_waypoint;
  cfg.speed_mps = 1.5;
  radio::Mobility m(t, cfg, 1);
  double acc = 0;
  int samples = 0;
  for (int step = 1; step <= 400; ++step) {
    m.advance_mobility(seconds(10.0 * step));
    if (step > 200) {
      acc += t.mean_degree();
      ++samples;
    }
  }
  EXPECT_GT(acc / samples, 130);
  EXPECT_LT(acc / samples, 190);
}

TEST(TopologyProperty, GeometricAdjacencyIsSymmetric) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    sim::RngStream rng(s, 0, sim::StreamPurpose::placement);
    auto t = Topology::random_geometric(80, Arena{150, 150}, 40, rng);
    for (NodeId a = 0; a < 80; ++a)
      for (NodeId b = 0; b < 80; ++b) ASSERT_EQ(t.in_range(a, b), t.in_range(b, a));
  }
}

TEST(Topology, ExplicitAsymmetryRejectedByDefault) {
  EXPECT_THROW(Topology::explicit_adjacency({{1}, {}}), ConfigError);
  EXPECT_NO_THROW(Topology::explicit_adjacency({{1}, {}}, true));
  auto t = Topology::explicit_adjacency({{1}, {0, 2}, {1}});
  EXPECT_EQ(t.hop_distances(0), (std::vector<int>{0, 1, 2}));
}

namespace {
struct Fixture {
  sim::Engine engine;
  Topology topo;
  radio::Medium<int> medium;
  struct Rx {
    NodeId listener;
    int frame;
    RxOutcome outcome;
    SimTime at;
  };
  std::vector<Rx> got;
  Fixture(Topology t, radio::ChannelConfig cfg = {})
      : topo(std::move(t)), medium(engine, topo, cfg, 1) {
    medium.on_receive([this](NodeId l, const radio::Transmission<int>& tx, RxOutcome o) {
      got.push_back({l, tx.frame, o, engine.now()});
    });
  }
  void at(SimTime t, std::function<void()> f) { engine.schedule(t, kNoNode, sim::EventKind::timer, std::move(f)); }
};
}  // namespace

TEST(Medium, LoneBeaconIsDecoded) {
  Fixture f(Topology::clique(2));
  f.medium.set_radio(0, true);
  f.medium.set_radio(1, true);
  f.at(millis(1), [&] { f.medium.start_transmission(0, 7, millis(1)); });
  f.engine.run_until(millis(5));
  ASSERT_EQ(f.got.size(), 1u);
  EXPECT_EQ(f.got[0].listener, 1u);
  EXPECT_EQ(f.got[0].frame, 7);
  EXPECT_EQ(f.got[0].outcome, RxOutcome::decoded);
  EXPECT_EQ(f.got[0].at, millis(2));
}

TEST(Medium, SleepingDestinationGetsNothing) {
  Fixture f(Topology::clique(2));
  f.medium.set_radio(0, true);
  f.at(millis(1), [&] { f.medium.start_transmission(0, 7, millis(1)); });
  // wakes up in the middle of the frame: still nothing
  f.at(micros(1500), [&] { f.medium.set_radio(1, true); });
  f.engine.run_until(millis(5));
  EXPECT_TRUE(f.got.empty());
}

TEST(Medium, RadioOffMidFrameLosesIt) {
  Fixture f(Topology::clique(2));
  f.medium.set_radio(0, true);
  f.medium.set_radio(1, true);
  f.at(millis(1), [&] { f.medium.start_transmission(0, 7, millis(2)); });
  f.at(millis(2), [&] { f.medium.set_radio(1, false); });
  f.at(micros(2500), [&] { f.medium.set_radio(1, true); });
  f.engine.run_until(millis(5));
  EXPECT_TRUE(f.got.empty());
}

TEST(Medium, OverlapCollidesAtListener) {
  Fixture f(Topology::clique(3));
  for (NodeId n = 0; n < 3; ++n) f.medium.set_radio(n, true);
  f.at(millis(1), [&] { f.medium.start_transmission(0, 1, millis(2)); });
  f.at(millis(2), [&] { f.medium.start_transmission(1, 2, millis(2)); });
  f.engine.run_until(millis(10));
  int at2 = 0;
  for (const auto& r : f.got) {
    if (r.listener == 2) {
      ++at2;
      EXPECT_EQ(r.outcome, RxOutcome::collision);
    }
  }
  EXPECT_EQ(at2, 2);
}

TEST(Medium, SimultaneousAcksCollideWithoutCapture) {
  Fixture f(Topology::geometric({{0, 0}, {10, 0}, {30, 0}}, Arena{50, 50}, 40));
  for (NodeId n = 0; n < 3; ++n) f.medium.set_radio(n, true);
  f.at(millis(1), [&] {
    f.medium.start_transmission(1, 1, micros(1100));
    f.medium.start_transmission(2, 2, micros(1100));
  });
  f.engine.run_until(millis(5));
  for (const auto& r : f.got)
    if (r.listener == 0) EXPECT_EQ(r.outcome, RxOutcome::collision);
}

TEST(Medium, CaptureDecodesNearestSender) {
  radio::ChannelConfig cfg;
  cfg.capture = true;
  cfg.p_capture = 1.0;
  Fixture f(Topology::geometric({{0, 0}, {10, 0}, {30, 0}}, Arena{50, 50}, 40), cfg);
  for (NodeId n = 0; n < 3; ++n) f.medium.set_radio(n, true);
  f.at(millis(1), [&] {
    f.medium.start_transmission(1, 1, micros(1100));
    f.medium.start_transmission(2, 2, micros(1100));
  });
  f.engine.run_until(millis(5));
  int decoded = 0;
  for (const auto& r : f.got) {
    if (r.listener != 0) continue;
    if (r.outcome == RxOutcome::decoded) {
      ++decoded;
      EXPECT_EQ(r.frame, 1);
    }
  }
  EXPECT_EQ(decoded, 1);
}

TEST(Medium, OutOfRangeSenderNeverDecodedOrInterfering) {
  // 0 -- 1 -- 2 chain: 0 and 2 are hidden from each other
  Fixture f(Topology::explicit_adjacency({{1}, {0, 2}, {1}}));
  for (NodeId n = 0; n < 3; ++n) f.medium.set_radio(n, true);
  f.at(millis(1), [&] { f.medium.start_transmission(0, 1, millis(1)); });
  f.engine.run_until(millis(5));
  ASSERT_EQ(f.got.size(), 1u);
  EXPECT_EQ(f.got[0].listener, 1u);
}

TEST(Medium, HalfDuplexSenderCannotHear) {
  Fixture f(Topology::clique(2));
  f.medium.set_radio(0, true);
  f.medium.set_radio(1, true);
  f.at(millis(1), [&] { f.medium.start_transmission(0, 1, millis(2)); });
  f.at(millis(2), [&] { f.medium.start_transmission(1, 2, millis(2)); });
  f.engine.run_until(millis(10));
  for (const auto& r : f.got) EXPECT_NE(r.outcome, RxOutcome::decoded);
}

TEST(Medium, DoubleTransmitIsProtocolBug) {
  Fixture f(Topology::clique(2));
  f.medium.set_radio(0, true);
  f.medium.start_transmission(0, 1, millis(2));
  EXPECT_THROW(f.medium.start_transmission(0, 2, millis(1)), ProtocolError);
  EXPECT_THROW(f.medium.start_transmission(1, 2, millis(1)), ProtocolError);  // radio off
}

TEST(Medium, RadioAccountingAndBusy) {
  Fixture f(Topology::clique(2));
  f.at(millis(10), [&] { f.medium.set_radio(0, true); });
  f.at(millis(12), [&] {
    f.medium.start_transmission(0, 1, millis(3));
    EXPECT_TRUE(f.medium.channel_busy(1));
    EXPECT_EQ(f.medium.busy_until(1), millis(15));
    EXPECT_FALSE(f.medium.channel_busy(0));
  });
  f.at(millis(20), [&] {
    f.medium.set_radio(0, false);
    EXPECT_TRUE(f.medium.activity_between(1, millis(11), millis(13)));
    EXPECT_FALSE(f.medium.activity_between(1, millis(15), millis(20)));
    EXPECT_TRUE(f.medium.energy_since(1, millis(14)));
    EXPECT_FALSE(f.medium.energy_since(1, millis(15)));
  });
  f.engine.run_until(millis(30));
  EXPECT_EQ(f.medium.radio_on_time(0), millis(10));
  EXPECT_EQ(f.medium.radio_on_time(1), SimTime::zero());
}

TEST(Mobility, StationaryKeepsPositions) {
  auto t = Topology::geometric({{1, 2}, {3, 4}}, Arena{10, 10}, 5);
  radio::Mobility m(t, {}, 1);
  m.advance_mobility(seconds(100));
  EXPECT_EQ(t.position(0).x, 1);
  EXPECT_EQ(t.position(1).y, 4);
}

TEST(Mobility, WalkerCoversSpeedTimesTime) {
  auto t = Topology::geometric({{0, 0}, {100, 100}}, Arena{100, 100}, 5);
  radio::MobilityConfig cfg;
  cfg.kind = radio::MobilityKind::random_waypoint;
  cfg.speed_mps = 1.5;
  radio::Mobility m(t, cfg, 1);
  m.set_waypoint(0, {30, 0});
  m.advance_mobility(seconds(10));
  EXPECT_NEAR(t.position(0).x, 15.0, 1e-9);
  EXPECT_NEAR(t.position(0).y, 0.0, 1e-9);
}

TEST(MobilityProperty, RandomWaypointStaysInsideArena) {
  auto t = Topology::geometric(std::vector<Position>(20, Position{50, 50}), Arena{150, 150}, 50);
  radio::MobilityConfig cfg;
  cfg.kind = radio::MobilityKind::random_waypoint;
  cfg.speed_mps = 7;
  cfg.pause_s = 0.5;
  radio::Mobility m(t, cfg, 3);
  for (int step = 1; step <= 100000; ++step) {
    m.advance_mobility(millis(100.0 * step));
    if (step % 97 == 0)
      for (const auto& p : t.positions()) ASSERT_TRUE(t.arena().contains(p));
  }
}

TEST(Mobility, TraceRowsApplyAtTheirTime) {
  std::istringstream in("# t node x y\n0 0 1 1\n0 1 2 2\n5.0 0 9 9\n");
  Arena a{10, 10};
  auto rows = radio::parse_mobility_trace(in, a, 2);
  auto t = Topology::geometric({{0, 0}, {0, 0}}, a, 3);
  radio::MobilityConfig cfg;
  cfg.kind = radio::MobilityKind::trace;
  cfg.trace_file = "inline";
  radio::Mobility m(t, cfg, 1, rows);
  EXPECT_EQ(t.position(0).x, 1);
  EXPECT_TRUE(t.in_range(0, 1));
  m.advance_mobility(seconds(4.9));
  EXPECT_EQ(t.position(0).x, 1);
  m.advance_mobility(seconds(5));
  EXPECT_EQ(t.position(0).x, 9);
  EXPECT_FALSE(t.in_range(0, 1));
}

TEST(Mobility, TraceOutsideArenaIsConfigError) {
  std::istringstream in("0 0 1 1\n1 0 11 1\n");
  EXPECT_THROW(radio::parse_mobility_trace(in, Arena{10, 10}, 1), ConfigError);
  std::istringstream bad("0 3 1 1\n");
  EXPECT_THROW(radio::parse_mobility_trace(bad, Arena{10, 10}, 1), ConfigError);
}
