#pragma once

#include <optional>
#include <vector>

#include "dosim/agents/alarm.hpp"
#include "dosim/agents/messages.hpp"
#include "dosim/agents/signature.hpp"
#include "dosim/flows/flow_table.hpp"
#include "dosim/sim/host.hpp"

namespace dosim::agents {

/// Network sensor tapping one link: windowed flow features for its DRA plus
/// immediate signature alarms.
class NetworkSensor {
 public:
  NetworkSensor(AgentId id, AgentId dra, flows::FlowTableConfig config = {}, SimTime start = 0.0);

  const AgentId& id() const noexcept { return id_; }
  const AgentId& dra() const noexcept { return dra_; }

  /// Records a packet seen on the vantage link. A signature hit yields an
  /// alarm about the packet's destination, stamped with the observation time.
  /// Packets arriving at or after the window end wait for the next window.
  std::optional<Alarm> observe(const sim::Packet& packet, SimTime now);

  /// Window boundary: closes the window and returns the report for the DRA.
  FlowReport step(SimTime now);

 private:
  AgentId id_;
  AgentId dra_;
  flows::FlowTable table_;
  std::vector<std::pair<sim::Packet, SimTime>> early_;
};

struct HostSensorConfig {
  double util_threshold = 0.9;
  double sustain = 1.0;     // seconds above threshold before alarming
  double min_gap = 1.0;     // at most one resource alarm per gap
};

/// Host sensor sampling its host's resources.
class HostSensor {
 public:
  HostSensor(AgentId id, AgentId dra, NodeId host, HostSensorConfig config = {});

  const AgentId& id() const noexcept { return id_; }
  const AgentId& dra() const noexcept { return dra_; }
  NodeId host() const noexcept { return host_; }

  /// Alarms when utilization stayed above the threshold for `sustain` seconds
  /// or memory is exhausted; rate limited to one alarm per `min_gap`.
  std::optional<Alarm> sample(const sim::HostState& state, SimTime now);

  /// Severity-1 alarm raised the moment the host goes down.
  Alarm on_crash(SimTime now);

 private:
  AgentId id_;
  AgentId dra_;
  NodeId host_;
  HostSensorConfig config_;
  std::optional<SimTime> above_since_;
  std::optional<SimTime> last_alarm_;
};

}  // namespace dosim::agents
