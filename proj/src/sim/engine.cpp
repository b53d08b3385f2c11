#include "dosim/sim/engine.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace dosim::sim {

namespace {
std::uint64_t mix(std::uint64_t state, std::uint64_t word) noexcept {
  for (int i = 0; i < 8; ++i) {
    state ^= (word >> (8 * i)) & 0xffU;
    state *= 0x100000001b3ULL;
  }
  return state;
}
}  // namespace

EventId Engine::schedule(SimTime time, Action action) {
  if (time < now_) {
    throw CausalityError("event scheduled at t=" + std::to_string(time) +
                         " before current time t=" + std::to_string(now_));
  }
  const auto seq = next_seq_++;
  heap_.push_back(Event{time, seq, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return seq;
}

void Engine::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw CausalityError("run_until target t=" + std::to_string(t_end) +
                         " is in the past (now t=" + std::to_string(now_) + ")");
  }
  while (!heap_.empty() && heap_.front().time <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    now_ = ev.time;
    trace_hash_ = mix(mix(trace_hash_, std::bit_cast<std::uint64_t>(ev.time)), ev.seq);
    ++executed_;
    ev.action();
  }
  now_ = t_end;
}

}  // namespace dosim::sim
