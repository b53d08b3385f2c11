#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dosim/flows/features.hpp"
#include "dosim/sim/network.hpp"
#include "dosim/trust/trust_model.hpp"

namespace dosim::agents {

class GeneralizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RuleRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RuleId = std::uint64_t;

/// Packets at or above this size are oversized; rules generalised from
/// oversized-packet clusters carry `size >= kOversize`.
inline constexpr std::uint32_t kOversize = 65536;

/// Blocking rule for a network element. A packet matches only if every
/// present predicate holds.
struct FilterRule {
  RuleId id = 0;
  std::optional<NodeId> dst;
  std::optional<Proto> proto;
  std::vector<NodeId> src_in;  // sorted; empty means no source predicate
  std::optional<double> min_rate;
  std::optional<std::uint32_t> min_size;
  SimTime installed_at = 0.0;
  double ttl = 30.0;
  AgentId origin_dra;

  bool has_predicate() const noexcept {
    return dst || proto || !src_in.empty() || min_rate || min_size;
  }
  /// `flow_rate` is the element's own measured packets/s for the packet's flow.
  bool matches(const sim::Packet& packet, double flow_rate) const noexcept;
  bool same_predicates(const FilterRule& other) const noexcept;
  /// Active on [installed_at, installed_at + ttl).
  bool active(SimTime now) const noexcept { return now >= installed_at && now < installed_at + ttl; }
};

/// One reported window of a member flow.
struct FlowRecord {
  FlowKey key;
  flows::FeatureVector features;
};

/// Describes a cluster by what its member flows share: common destination,
/// common protocol, the lowest member rate, and an oversize predicate when the
/// members' mean size ratio exceeds 2. Falls back to the member source set so
/// that rate is never the only predicate. Records for flows that are not
/// members of `cluster` are ignored; throws GeneralizationError when nothing
/// is left.
FilterRule generalize_rule(const trust::TrustCluster& cluster, std::span<const FlowRecord> members);

/// Reconfigurable network element: the filter state living on a kind=ne node.
class NetworkElement {
 public:
  static constexpr double kRateWindow = 1.0;

  NetworkElement(NodeId node, sim::NodeKind kind);

  NodeId node() const noexcept { return node_; }

  struct Installed {
    RuleId id;
    bool refreshed;
  };
  /// Installs at `now`. A rule with identical predicates is refreshed in place
  /// and keeps its id. Throws RuleRejected unless this node is kind=ne.
  Installed install_rule(FilterRule rule, SimTime now);

  /// Removes rules whose lifetime has ended; returns how many.
  std::size_t expire_rules(SimTime now);

  /// Updates the flow's rate counter, then returns the lowest-id active rule
  /// that matches, if any.
  std::optional<sim::FilterHit> apply(const sim::Packet& packet, SimTime now);

  /// Packets seen for the flow in [now - 1 s, now].
  double flow_rate(const FlowKey& key, SimTime now);

  const std::vector<FilterRule>& rules() const noexcept { return rules_; }

 private:
  NodeId node_;
  sim::NodeKind kind_;
  std::vector<FilterRule> rules_;  // ascending id
  std::unordered_map<FlowKey, std::deque<SimTime>, FlowKeyHash> seen_;
};

}  // namespace dosim::agents
