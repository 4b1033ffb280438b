#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "minins/sim_time.hpp"

namespace minins {

/// Handle to a scheduled event; valid until it dispatches or is cancelled.
struct EventId {
  std::uint64_t seq = 0;
  auto operator<=>(const EventId&) const = default;
};

/// Discrete-event scheduler.
///
/// Events dispatch in (time, insertion sequence) order, so simultaneous events
/// run first-in first-out. The engine knows nothing about packets; actions
/// are closures over the owning simulation.
class Scheduler {
 public:
  using Action = std::function<void()>;

  // Throws ScheduleError if `at` lies before now().
  EventId schedule(SimTime at, Action action);
  EventId schedule_after(SimTime delay, Action action) { return schedule(now_ + delay, std::move(action)); }

  // True if the event was pending and is now removed.
  bool cancel(EventId id);

  // Dispatches every pending event with time <= limit, including events
  // scheduled while running, until the queue drains or halt() is called.
  // Returns the clock, i.e. the time of the last dispatched event.
  SimTime run_until(SimTime limit);

  // Ends the current run_until() after the running action returns.
  void halt() { halted_ = true; }

  SimTime now() const { return now_; }
  std::size_t pending() const { return actions_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    // Min-heap on (time, seq).
    bool operator>(const Entry& rhs) const {
      return time != rhs.time ? time > rhs.time : seq > rhs.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  std::unordered_map<std::uint64_t, Action> actions_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  SimTime now_;
  bool halted_ = false;
};

}  // namespace minins
