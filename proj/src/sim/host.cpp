#include "dosim/sim/host.hpp"

#include <algorithm>
#include <stdexcept>

#include "dosim/agents/signature.hpp"

namespace dosim::sim {

HostState::HostState(NodeId node, const Node& spec, double idle_timeout)
    : node_(node),
      cpu_capacity_(spec.cpu_capacity),
      mem_slots_(spec.mem_slots),
      vulnerable_to_(spec.vulnerable_to),
      idle_timeout_(idle_timeout) {}

void HostState::recover() noexcept {
  status_ = HostStatus::Up;
  arrivals_.clear();
  flows_.clear();
  cpu_util_ = 0.0;
}

void HostState::release_idle(SimTime now) {
  std::erase_if(flows_, [&](const auto& entry) { return now - entry.second >= idle_timeout_; });
}

void HostState::trim_window(SimTime now) {
  while (!arrivals_.empty() && arrivals_.front() <= now - kCpuWindow) arrivals_.pop_front();
}

HostOutcome host_process(HostState& host, const Packet& packet, SimTime now) {
  if (host.status_ == HostStatus::Crashed) return HostOutcome::DeadDrop;

  host.release_idle(now);
  host.trim_window(now);
  host.arrivals_.push_back(now);

  if (auto sig = agents::signature_match(packet); sig && host.vulnerable_to_.contains(*sig)) {
    host.status_ = HostStatus::Crashed;
    return HostOutcome::CrashTriggered;
  }

  const auto key = packet.flow_key();
  if (auto it = host.flows_.find(key); it != host.flows_.end()) {
    it->second = now;
    return HostOutcome::Accepted;
  }
  if (host.flows_.size() >= host.mem_slots_) return HostOutcome::RefusedMem;
  host.flows_.emplace(key, now);
  return HostOutcome::Accepted;
}

double advance_host_resources(HostState& host, double dt, SimTime now) {
  if (!(dt > 0)) throw std::invalid_argument("advance_host_resources needs dt > 0");
  host.trim_window(now);
  host.release_idle(now);
  const double budget = host.cpu_capacity_ * HostState::kCpuWindow;
  host.cpu_util_ = std::min(1.0, static_cast<double>(host.arrivals_.size()) / budget);
  host.history_.emplace_back(now, host.cpu_util_);
  if (host.history_.size() > HostState::kHistoryCap) host.history_.pop_front();
  return host.cpu_util_;
}

}  // namespace dosim::sim
