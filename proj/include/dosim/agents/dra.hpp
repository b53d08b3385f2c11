#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dosim/agents/messages.hpp"
#include "dosim/trust/feedback.hpp"
#include "dosim/trust/trust_model.hpp"

namespace dosim::agents {

/// User-defined reaction policy.
struct Policy {
  int k_confirm = 3;          // consecutive malicious windows before a rule
  double rule_ttl = 30.0;
  double broadcast_on = 0.3;  // inform peers when trust first drops below this

  void validate() const;
};

/// A network element this DRA may reconfigure.
struct NeTarget {
  AgentId agent;
  NodeId node = 0;
};

struct DraConfig {
  AgentId id;
  trust::TrustParams trust;
  Policy policy;
  /// Peers receiving this DRA's informs and queries.
  std::vector<AgentId> subscriptions;
  std::vector<NeTarget> nes;
  double feedback_horizon = 5.0;
  /// Hop count between two nodes; used to pick the NE nearest to a victim.
  std::function<int(NodeId, NodeId)> hops;
  /// Prefix for rule ids so ids from different DRAs never collide.
  std::uint64_t rule_id_base = 0;
};

/// Logged whenever a cluster's class changes.
struct ClassificationChange {
  AgentId dra;
  trust::ClusterId cluster = 0;
  trust::TrustClass cls = trust::TrustClass::Unknown;
  double trust = 0.5;
  std::int64_t weight = 0;
  flows::FeatureVector centroid;
  bool shadow = false;
  std::vector<FlowKey> members;
};

/// A message the agent could not use. Logged, never fatal.
struct AgentError {
  AgentId agent;
  std::string what;
};

struct DraOutput {
  std::vector<AgentMessage> messages;
  std::vector<ClassificationChange> changes;
  std::vector<AgentError> errors;
};

/// Detection and reaction agent: owns one trust model and turns sensor
/// reports, host alarms and peer reputation into classifications, informs and
/// filter rules.
class DetectionReactionAgent {
 public:
  explicit DetectionReactionAgent(DraConfig config);

  const AgentId& id() const noexcept { return config_.id; }
  const trust::TrustModel& model() const noexcept { return model_; }
  int streak(trust::ClusterId id) const;
  const std::vector<FilterRule>& issued_rules() const noexcept { return issued_; }

  /// One window step over the messages delivered since the previous step.
  DraOutput step(const std::vector<AgentMessage>& inbox, SimTime now);

 private:
  AgentMessage make(const AgentId& to, SimTime now, MessageBody body) const;
  void note_class(trust::ClusterId id, DraOutput& out);
  std::optional<NeTarget> nearest_ne(const FilterRule& rule, const std::vector<FlowRecord>& members) const;

  DraConfig config_;
  trust::TrustModel model_;
  std::map<trust::ClusterId, int> streak_;
  std::map<trust::ClusterId, trust::TrustClass> last_class_;
  std::set<trust::ClusterId> informed_;
  std::map<trust::ClusterId, SimTime> last_rule_at_;
  std::map<FlowKey, trust::ClusterId> owner_;
  std::map<FlowKey, flows::FeatureVector> latest_;
  std::vector<Alarm> alarms_;
  std::vector<FilterRule> issued_;
  std::uint64_t next_rule_ = 1;
};

}  // namespace dosim::agents
