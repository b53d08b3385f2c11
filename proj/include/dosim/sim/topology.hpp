#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dosim/types.hpp"

namespace dosim::sim {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { Host, Router, Ne };

std::string_view to_string(NodeKind kind) noexcept;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Host;
  double cpu_capacity = 1000.0;  // packets/s
  std::uint32_t mem_slots = 1024;
  std::set<AttackKind> vulnerable_to;
  /// Crash is absorbing unless set.
  std::optional<double> recovery_after;
};

/// Full-duplex link; each direction has its own queue with the same parameters.
struct Link {
  std::string id;
  NodeId from = 0;
  NodeId to = 0;
  double capacity = 1000.0;  // packets/s
  std::uint32_t queue_limit = 100;
  double latency = 0.001;    // seconds

  NodeId other(NodeId end) const noexcept { return end == from ? to : from; }
};

/// One direction of a link: dir 0 runs from -> to, dir 1 runs to -> from.
struct Hop {
  LinkId link = 0;
  int dir = 0;
  NodeId next = 0;
};

class Topology {
 public:
  NodeId add_node(Node node);
  LinkId add_link(Link link);

  /// Unique ids, resolvable endpoints, positive link parameters, connected graph.
  void validate() const;

  std::optional<NodeId> find_node(std::string_view id) const;
  std::optional<LinkId> find_link(std::string_view id) const;

  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Link& link(LinkId id) const { return links_.at(id); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  std::vector<Hop> adjacent(NodeId id) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::unordered_map<std::string, LinkId> link_index_;
};

/// Static shortest-path (hop count) routes computed once at load. Hosts never
/// carry transit traffic; ties go to the lowest neighbor id.
class RoutingTable {
 public:
  static RoutingTable compute(const Topology& topo);

  std::optional<Hop> next_hop(NodeId at, NodeId dst) const;
  /// Hop count, or -1 when unreachable.
  int hops(NodeId from, NodeId to) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::optional<Hop>> next_;  // [at * n + dst]
  std::vector<int> dist_;
};

}  // namespace dosim::sim
