#include "dosim/sim/topology.hpp"

#include <algorithm>
#include <deque>

namespace dosim::sim {

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Host: return "host";
    case NodeKind::Router: return "router";
    case NodeKind::Ne: return "ne";
  }
  return "?";
}

NodeId Topology::add_node(Node node) {
  if (node_index_.contains(node.id)) throw TopologyError("duplicate node id \"" + node.id + "\"");
  const auto id = static_cast<NodeId>(nodes_.size());
  node_index_.emplace(node.id, id);
  nodes_.push_back(std::move(node));
  return id;
}

LinkId Topology::add_link(Link link) {
  if (link_index_.contains(link.id)) throw TopologyError("duplicate link id \"" + link.id + "\"");
  if (link.from >= nodes_.size() || link.to >= nodes_.size()) {
    throw TopologyError("link \"" + link.id + "\" references an unknown node");
  }
  const auto id = static_cast<LinkId>(links_.size());
  link_index_.emplace(link.id, id);
  links_.push_back(std::move(link));
  return id;
}

std::optional<NodeId> Topology::find_node(std::string_view id) const {
  if (auto it = node_index_.find(std::string(id)); it != node_index_.end()) return it->second;
  return std::nullopt;
}

std::optional<LinkId> Topology::find_link(std::string_view id) const {
  if (auto it = link_index_.find(std::string(id)); it != link_index_.end()) return it->second;
  return std::nullopt;
}

std::vector<Hop> Topology::adjacent(NodeId id) const {
  std::vector<Hop> out;
  for (LinkId l = 0; l < links_.size(); ++l) {
    const auto& link = links_[l];
    if (link.from == id) out.push_back(Hop{l, 0, link.to});
    if (link.to == id && link.from != id) out.push_back(Hop{l, 1, link.from});
  }
  std::sort(out.begin(), out.end(), [](const Hop& a, const Hop& b) {
    return a.next != b.next ? a.next < b.next : a.link < b.link;
  });
  return out;
}

void Topology::validate() const {
  if (nodes_.empty()) throw TopologyError("topology has no nodes");
  for (const auto& node : nodes_) {
    if (node.cpu_capacity <= 0) throw TopologyError("node \"" + node.id + "\" needs cpu_capacity > 0");
    if (node.mem_slots == 0) throw TopologyError("node \"" + node.id + "\" needs mem_slots >= 1");
    if (node.recovery_after && *node.recovery_after <= 0) {
      throw TopologyError("node \"" + node.id + "\" needs recovery_after > 0");
    }
  }
  for (const auto& link : links_) {
    if (link.capacity <= 0) throw TopologyError("link \"" + link.id + "\" needs capacity > 0");
    if (link.latency < 0) throw TopologyError("link \"" + link.id + "\" needs latency >= 0");
    if (link.from == link.to) throw TopologyError("link \"" + link.id + "\" is a self-loop");
  }
  std::vector<bool> seen(nodes_.size(), false);
  std::deque<NodeId> frontier{0};
  seen[0] = true;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop_front();
    for (const auto& hop : adjacent(u)) {
      if (!seen[hop.next]) {
        seen[hop.next] = true;
        frontier.push_back(hop.next);
      }
    }
  }
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (!seen[id]) throw TopologyError("topology is not connected: \"" + nodes_[id].id + "\" is unreachable");
  }
}

RoutingTable RoutingTable::compute(const Topology& topo) {
  RoutingTable table;
  const auto n = topo.nodes().size();
  table.n_ = n;
  table.next_.assign(n * n, std::nullopt);
  table.dist_.assign(n * n, -1);
  std::vector<std::vector<Hop>> adj(n);
  for (NodeId u = 0; u < n; ++u) adj[u] = topo.adjacent(u);

  // Reverse BFS from every destination; a node's next hop is the neighbor it
  // was discovered from.
  for (NodeId dst = 0; dst < n; ++dst) {
    std::deque<NodeId> frontier{dst};
    table.dist_[dst * n + dst] = 0;
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop_front();
      for (const auto& hop : adj[u]) {
        const auto v = hop.next;
        if (table.dist_[v * n + dst] >= 0) continue;
        table.dist_[v * n + dst] = table.dist_[u * n + dst] + 1;
        // Hop from v back across the same link towards u.
        table.next_[v * n + dst] = Hop{hop.link, hop.dir == 0 ? 1 : 0, u};
        if (topo.node(v).kind != NodeKind::Host) frontier.push_back(v);
      }
    }
  }
  return table;
}

std::optional<Hop> RoutingTable::next_hop(NodeId at, NodeId dst) const {
  if (at >= n_ || dst >= n_) return std::nullopt;
  return next_[at * n_ + dst];
}

int RoutingTable::hops(NodeId from, NodeId to) const {
  if (from >= n_ || to >= n_) return -1;
  return dist_[from * n_ + to];
}

}  // namespace dosim::sim
