#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dosim/types.hpp"

namespace dosim::sim {

class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using EventId = std::uint64_t;

/// Single-threaded discrete-event loop. Events run in (time, seq) order where
/// seq increases with every schedule() call.
class Engine {
 public:
  using Action = std::function<void()>;

  EventId schedule(SimTime time, Action action);

  /// Runs every event with time <= t_end, then parks the clock at t_end.
  void run_until(SimTime t_end);

  SimTime now() const noexcept { return now_; }
  std::size_t pending() const noexcept { return heap_.size(); }
  std::uint64_t executed() const noexcept { return executed_; }

  /// Running fingerprint of the executed (time, seq) trace.
  std::uint64_t trace_hash() const noexcept { return trace_hash_; }

 private:
  struct Event {
    SimTime time;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::vector<Event> heap_;
  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t executed_ = 0;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace dosim::sim
