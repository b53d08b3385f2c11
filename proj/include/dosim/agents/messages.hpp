#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "dosim/agents/alarm.hpp"
#include "dosim/agents/rules.hpp"
#include "dosim/flows/features.hpp"
#include "dosim/trust/reputation.hpp"

namespace dosim::agents {

/// Window report from a network sensor: one vector per active flow plus the
/// flows that idled out.
struct FlowReport {
  std::vector<std::pair<FlowKey, flows::FeatureVector>> flows;
  std::vector<FlowKey> closed;
};

using MessageBody = std::variant<FlowReport, Alarm, trust::ReputationMessage, FilterRule>;

/// The only channel between agents. Immutable once sent.
struct AgentMessage {
  AgentId from;
  AgentId to;
  SimTime at = 0.0;
  MessageBody body;
};

}  // namespace dosim::agents
