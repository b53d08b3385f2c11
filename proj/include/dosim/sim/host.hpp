#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "dosim/sim/packet.hpp"
#include "dosim/sim/topology.hpp"

namespace dosim::sim {

enum class HostStatus : std::uint8_t { Up, Crashed };

enum class HostOutcome : std::uint8_t {
  Accepted,
  RefusedMem,
  CrashTriggered,
  /// Arrived at a crashed host; counted as delivered, but to the dead.
  DeadDrop,
};

/// Application-layer resources of one host: CPU as a packets/s budget over a
/// 1 s sliding window, memory as connection slots held by live flows.
class HostState {
 public:
  static constexpr double kCpuWindow = 1.0;
  static constexpr std::size_t kHistoryCap = 64;

  HostState() = default;
  HostState(NodeId node, const Node& spec, double idle_timeout = 5.0);

  NodeId node() const noexcept { return node_; }
  double cpu_util() const noexcept { return cpu_util_; }
  std::uint32_t mem_used() const noexcept { return static_cast<std::uint32_t>(flows_.size()); }
  std::uint32_t mem_slots() const noexcept { return mem_slots_; }
  HostStatus status() const noexcept { return status_; }
  const std::deque<std::pair<SimTime, double>>& util_history() const noexcept { return history_; }

  void crash() noexcept { status_ = HostStatus::Crashed; }
  /// Reboot: resources reset, status up.
  void recover() noexcept;

 private:
  friend HostOutcome host_process(HostState&, const Packet&, SimTime);
  friend double advance_host_resources(HostState&, double, SimTime);

  void release_idle(SimTime now);
  void trim_window(SimTime now);

  NodeId node_ = 0;
  double cpu_capacity_ = 1.0;
  std::uint32_t mem_slots_ = 1;
  std::set<AttackKind> vulnerable_to_;
  double idle_timeout_ = 5.0;

  double cpu_util_ = 0.0;
  HostStatus status_ = HostStatus::Up;
  std::deque<SimTime> arrivals_;
  std::map<FlowKey, SimTime> flows_;
  std::deque<std::pair<SimTime, double>> history_;
};

HostOutcome host_process(HostState& host, const Packet& packet, SimTime now);

/// Recomputes utilization over the last second and appends it to the history.
double advance_host_resources(HostState& host, double dt, SimTime now);

}  // namespace dosim::sim
