#include "minins/engine.hpp"

#include "minins/errors.hpp"

namespace minins {

EventId Scheduler::schedule(SimTime at, Action action) {
  if (at < now_) {
    throw ScheduleError("cannot schedule at " + format_seconds_fixed(at) + " s, clock is already at " +
                        format_seconds_fixed(now_) + " s");
  }
  std::uint64_t seq = next_seq_++;
  heap_.push(Entry{at, seq});
  actions_.emplace(seq, std::move(action));
  return EventId{seq};
}

bool Scheduler::cancel(EventId id) { return actions_.erase(id.seq) > 0; }

SimTime Scheduler::run_until(SimTime limit) {
  halted_ = false;
  while (!halted_ && !heap_.empty() && heap_.top().time <= limit) {
    Entry top = heap_.top();
    heap_.pop();
    auto it = actions_.find(top.seq);
    if (it == actions_.end()) continue;  // cancelled
    Action action = std::move(it->second);
    actions_.erase(it);
    now_ = top.time;
    ++dispatched_;
    action();
  }
  return now_;
}

}  // namespace minins
