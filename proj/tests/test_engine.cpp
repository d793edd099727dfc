#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "ewsn/errors.hpp"
#include "ewsn/sim/engine.hpp"
#include "ewsn/sim/rng.hpp"

using namespace ewsn;
using sim::Engine;
using sim::EventKind;

TEST(Engine, EventAtZeroFromZeroRunsFirst) {
  Engine e;
  std::vector<int> order;
  e.schedule(seconds(1), 0, EventKind::timer, [&] { order.push_back(1); });
  e.schedule(SimTime::zero(), 0, EventKind::timer, [&] { order.push_back(0); });
  e.run_until(seconds(2));
  ASSERT_EQ(order, (std::vector<int>{0, 1}));
}

TEST(Engine, TiesBreakByInsertionOrder) {
  Engine e;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) e.schedule(millis(7), 0, EventKind::timer, [&order, i] { order.push_back(i); });
  e.run_until(seconds(1));
  ASSERT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Engine, OutOfOrderSchedulingDispatchesByTime) {
  Engine e;
  std::vector<int> order;
  e.schedule(micros(5), 0, EventKind::timer, [&] { order.push_back(5); });
  e.schedule(micros(3), 0, EventKind::timer, [&] { order.push_back(3); });
  e.run_until(micros(10));
  ASSERT_EQ(order, (std::vector<int>{3, 5}));
}

TEST(Engine, SchedulingInThePastIsAConfigError) {
  Engine e;
  e.schedule(seconds(1), 0, EventKind::timer, [&] {
    EXPECT_THROW(e.schedule(millis(500), 0, EventKind::timer, {}), ConfigError);
  });
  e.run_until(seconds(2));
  EXPECT_THROW(e.schedule(seconds(1), 0, EventKind::timer, {}), ConfigError);
}

TEST(Engine, EmptyQueueParksClockAtEnd) {
  Engine e;
  auto m = e.run_until(seconds(10));
  EXPECT_EQ(e.now(), seconds(10));
  EXPECT_EQ(m.dispatched, 0u);
  EXPECT_TRUE(m.nodes.empty());
  EXPECT_TRUE(m.packets.empty());
}

TEST(Engine, PeriodicWakeupCountsTen) {
  Engine e;
  int n = 0;
  std::function<void()> tick = [&] {
    ++n;
    e.schedule_in(seconds(1), 0, EventKind::wakeup, tick);
  };
  e.schedule(seconds(1), 0, EventKind::wakeup, tick);
  e.run_until(seconds(10));
  EXPECT_EQ(n, 10);
}

TEST(Engine, HandlerErrorCarriesClockAndNode) {
  Engine e;
  e.schedule(millis(3), 42, EventKind::timer, [] { throw ProtocolError("bad state"); });
  try {
    e.run_until(seconds(1));
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& ex) {
    std::string w = ex.what();
    EXPECT_NE(w.find("t=3000"), std::string::npos) << w;
    EXPECT_NE(w.find("node=42"), std::string::npos) << w;
    EXPECT_NE(w.find("bad state"), std::string::npos) << w;
  }
}

// property: observed dispatch sequence is sorted by (fire_at, seq) and the
// clock never goes backwards, for random self-scheduling workloads
TEST(EngineProperty, DispatchOrderIsTotalAndMonotone) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Engine e;
    sim::RngStream rng(seed, 0, sim::StreamPurpose::experiment);
    std::vector<sim::SimEvent> seen;
    e.set_observer([&](const sim::SimEvent& ev) { seen.push_back(ev); });
    SimTime last;
    std::function<void()> h = [&] {
      EXPECT_GE(e.now(), last);
      last = e.now();
      if (rng.bernoulli(0.7)) e.schedule_in(micros(static_cast<std::int64_t>(rng.index(50))), 0, EventKind::timer, h);
      if (rng.bernoulli(0.3)) e.schedule_in(micros(0), 1, EventKind::timer, h);
    };
    for (int i = 0; i < 50; ++i) e.schedule(micros(static_cast<std::int64_t>(rng.index(100))), 0, EventKind::timer, h);
    e.run_until(millis(5));
    for (std::size_t i = 1; i < seen.size(); ++i) {
      const auto& a = seen[i - 1];
      const auto& b = seen[i];
      ASSERT_TRUE(a.fire_at < b.fire_at || (a.fire_at == b.fire_at && a.seq < b.seq));
    }
  }
}

TEST(Engine, SameSeedSameTrace) {
  auto trace = [](std::uint64_t seed) {
    Engine e;
    sim::RngStream rng(seed, 3, sim::StreamPurpose::wakeup);
    std::vector<std::int64_t> t;
    std::function<void()> h = [&] {
      t.push_back(e.now().us());
      e.schedule_in(micros(1 + static_cast<std::int64_t>(rng.index(1000))), 0, EventKind::wakeup, h);
    };
    e.schedule(SimTime::zero(), 0, EventKind::wakeup, h);
    e.run_until(seconds(1));
    return t;
  };
  EXPECT_EQ(trace(9), trace(9));
  EXPECT_NE(trace(9), trace(10));
}

TEST(Rng, DegenerateIntervalReturnsBound) {
  sim::RngStream r(1, 0, sim::StreamPurpose::mac);
  EXPECT_EQ(sim::uniform_draw(r, 3.0, 3.0), 3.0);
}

TEST(Rng, ReversedIntervalIsConfigError) {
  sim::RngStream r(1, 0, sim::StreamPurpose::mac);
  EXPECT_THROW(sim::uniform_draw(r, 2.0, 1.0), ConfigError);
}

TEST(Rng, MillionDrawsMeanNearHalf) {
  sim::RngStream r(2024, 7, sim::StreamPurpose::experiment);
  double s = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    double v = sim::uniform_draw(r, 0.0, 1.0);
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    s += v;
  }
  EXPECT_NEAR(s / n, 0.5, 0.002);
}

TEST(Rng, StreamsAreReproducibleAndIndependent) {
  sim::RngStream a(5, 1, sim::StreamPurpose::wakeup);
  sim::RngStream b(5, 1, sim::StreamPurpose::wakeup);
  sim::RngStream c(5, 1, sim::StreamPurpose::mac);
  sim::RngStream d(5, 2, sim::StreamPurpose::wakeup);
  const double first = a.uniform01();
  EXPECT_EQ(first, b.uniform01());
  EXPECT_NE(first, c.uniform01());
  EXPECT_NE(first, d.uniform01());
}
