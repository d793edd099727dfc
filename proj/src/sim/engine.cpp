#include "ewsn/sim/engine.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "ewsn/errors.hpp"

namespace ewsn::sim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::wakeup: return "wakeup";
    case EventKind::tx_start: return "tx-start";
    case EventKind::tx_end: return "tx-end";
    case EventKind::timer: return "timer";
    case EventKind::app_send: return "app-send";
    case EventKind::mobility: return "mobility";
    case EventKind::control: return "control";
  }
  return "?";
}

std::uint64_t Engine::schedule(SimTime at, NodeId target, EventKind kind, Action action) {
  if (at < now_) {
    throw ConfigError(fmt::format("event ({}) for node {} scheduled at {} us, clock already at {} us",
                                  to_string(kind), target, at.us(), now_.us()));
  }
  Entry e{SimEvent{at, next_seq_++, target, kind}, std::move(action)};
  queue_.push_back(std::move(e));
  std::push_heap(queue_.begin(), queue_.end(), Later{});
  return next_seq_ - 1;
}

analytics::RunMetrics Engine::run_until(SimTime end) {
  if (end < now_) throw ConfigError("run_until: end lies in the past");
  while (!queue_.empty() && queue_.front().ev.fire_at <= end) {
    std::pop_heap(queue_.begin(), queue_.end(), Later{});
    Entry e = std::move(queue_.back());
    queue_.pop_back();
    now_ = e.ev.fire_at;
    ++dispatched_;
    if (observer_) observer_(e.ev);
    try {
      if (e.action) e.action();
    } catch (const SimulationError&) {
      throw;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw SimulationError(fmt::format("t={} us node={} event={}: {}", now_.us(),
                                        e.ev.target == kNoNode ? std::string("-") : std::to_string(e.ev.target),
                                        to_string(e.ev.kind), ex.what()));
    }
  }
  now_ = end;
  metrics_.end = end;
  metrics_.dispatched = dispatched_;
  return metrics_;
}

}  // namespace ewsn::sim
