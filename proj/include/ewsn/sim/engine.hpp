#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "ewsn/analytics/run_metrics.hpp"
#include "ewsn/sim/time.hpp"

namespace ewsn::sim {

enum class EventKind : std::uint8_t { wakeup, tx_start, tx_end, timer, app_send, mobility, control };

std::string_view to_string(EventKind k);

struct SimEvent {
  SimTime fire_at;
  std::uint64_t seq = 0;
  NodeId target = kNoNode;
  EventKind kind = EventKind::timer;
};

class Engine {
 public:
  using Action = std::function<void()>;
  using Observer = std::function<void(const SimEvent&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }

  // Throws ConfigError if at < now(). Returns the assigned seq.
  std::uint64_t schedule(SimTime at, NodeId target, EventKind kind, Action action);
  std::uint64_t schedule_in(SimTime delay, NodeId target, EventKind kind, Action action) {
    return schedule(now_ + delay, target, kind, std::move(action));
  }

  // Dispatches every event with fire_at <= end, then parks the clock at end.
  // A handler throwing ProtocolError (or anything else) is rethrown as
  // SimulationError with the clock and node attached.
  analytics::RunMetrics run_until(SimTime end);

  analytics::RunMetrics& metrics() { return metrics_; }
  const analytics::RunMetrics& metrics() const { return metrics_; }

  void set_observer(Observer obs) { observer_ = std::move(obs); }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Entry {
    SimEvent ev;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.ev.fire_at != b.ev.fire_at) return a.ev.fire_at > b.ev.fire_at;
      return a.ev.seq > b.ev.seq;
    }
  };

  SimTime now_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::vector<Entry> queue_;  // binary heap under Later
  analytics::RunMetrics metrics_;
  Observer observer_;
};

}  // namespace ewsn::sim
