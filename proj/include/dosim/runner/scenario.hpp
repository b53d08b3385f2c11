#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dosim/agents/dra.hpp"
#include "dosim/agents/sensors.hpp"
#include "dosim/attacks/aimd.hpp"
#include "dosim/attacks/generators.hpp"
#include "dosim/sim/topology.hpp"

namespace dosim::runner {

/// Invalid scenario document. Carries the 1-based position when known.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, std::optional<int> line = std::nullopt,
                std::optional<int> column = std::nullopt);

  std::optional<int> line() const noexcept { return line_; }
  std::optional<int> column() const noexcept { return column_; }

 private:
  std::optional<int> line_;
  std::optional<int> column_;
};

struct DraSpec {
  AgentId id;
  std::vector<AgentId> peers;
  /// NE nodes this DRA may reconfigure; empty means every ne node.
  std::vector<NodeId> nes;
};

struct NetworkSensorSpec {
  AgentId id;
  LinkId link = 0;
  AgentId dra;
};

struct HostSensorSpec {
  AgentId id;
  NodeId host = 0;
  AgentId dra;
};

struct AgentPlacement {
  trust::TrustParams trust;
  agents::Policy policy;
  agents::HostSensorConfig host_sensor;
  double window = 1.0;
  double sample_interval = 0.1;
  double feedback_horizon = 5.0;
  std::vector<DraSpec> dras;
  std::vector<NetworkSensorSpec> network_sensors;
  std::vector<HostSensorSpec> host_sensors;
};

struct Scenario {
  std::string name = "scenario";
  double duration = 0.0;
  std::uint64_t seed = 1;
  double bus_latency = 0.01;
  double idle_timeout = 5.0;
  sim::Topology topology;
  std::vector<attacks::LegitConfig> legit_senders;
  std::vector<attacks::GeneratorState> attacks;
  AgentPlacement agents;

  /// Earliest attack start, if any attack is configured.
  std::optional<SimTime> attack_start() const;
};

/// Parses a YAML scenario. Unknown keys, missing `topology`/`duration`,
/// malformed values and unresolved references raise ScenarioError.
Scenario parse_scenario(std::string_view text);

/// Reads and parses a file; I/O failures are reported as ScenarioError.
Scenario load_scenario(const std::string& path);

/// Agent id of the network element on an ne node.
std::string ne_agent_id(const sim::Topology& topo, NodeId node);

}  // namespace dosim::runner
