#include "dosim/sim/network.hpp"

namespace dosim::sim {

Network::Network(Engine& engine, Topology topology, double idle_timeout)
    : engine_(engine), topo_(std::move(topology)) {
  topo_.validate();
  routes_ = RoutingTable::compute(topo_);
  const auto n = static_cast<NodeId>(topo_.nodes().size());
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (routes_.hops(a, b) < 0) {
        throw TopologyError("no route from \"" + topo_.node(a).id + "\" to \"" + topo_.node(b).id +
                            "\" (hosts do not forward transit traffic)");
      }
    }
  }
  queues_.resize(2 * topo_.links().size());
  for (LinkId l = 0; l < topo_.links().size(); ++l) {
    queues_[2 * l].link = l;
    queues_[2 * l + 1].link = l;
  }
  hosts_.reserve(n);
  for (NodeId id = 0; id < n; ++id) hosts_.emplace_back(id, topo_.node(id), idle_timeout);
}

std::optional<PacketId> Network::inject(Packet packet) {
  if (packet.src >= hosts_.size() || packet.dst >= hosts_.size()) return std::nullopt;
  if (hosts_[packet.src].status() == HostStatus::Crashed) return std::nullopt;
  packet.id = next_packet_++;
  packet.created_at = engine_.now();
  ++stats_.injected;
  const auto id = packet.id;
  arrive(packet.src, std::move(packet));
  return id;
}

void Network::arrive(NodeId at, Packet packet) {
  const SimTime now = engine_.now();
  if (at == packet.dst) {
    deliver(at, std::move(packet));
    return;
  }
  const auto hop = routes_.next_hop(at, packet.dst);
  if (topo_.node(at).kind == NodeKind::Ne && hooks_.filter) {
    if (auto hit = hooks_.filter(at, packet, now)) {
      ++stats_.filter_dropped;
      if (hooks_.on_drop) hooks_.on_drop(packet, DropReason::Filter, at, std::nullopt, hit, now);
      return;
    }
  }
  auto& queue = queues_[2 * hop->link + hop->dir];
  const auto result = enqueue_packet(queue, packet, now, topo_.link(hop->link));
  if (std::holds_alternative<QueueFull>(result)) {
    ++stats_.queue_dropped;
    if (hooks_.on_drop) hooks_.on_drop(packet, DropReason::Queue, at, hop->link, std::nullopt, now);
    return;
  }
  const auto link = hop->link;
  const auto dir = hop->dir;
  engine_.schedule(std::get<Enqueued>(result).depart, [this, link, dir] { depart(link, dir); });
}

void Network::depart(LinkId link, int dir) {
  auto& queue = queues_[2 * link + dir];
  Packet packet = std::move(queue.queued.front());
  queue.queued.pop_front();
  const SimTime now = engine_.now();
  if (hooks_.on_transmit) hooks_.on_transmit(link, packet, now);
  const auto& spec = topo_.link(link);
  const NodeId next = dir == 0 ? spec.to : spec.from;
  ++on_wire_;
  engine_.schedule(now + spec.latency, [this, next, p = std::move(packet)]() mutable {
    --on_wire_;
    arrive(next, std::move(p));
  });
}

void Network::deliver(NodeId at, Packet packet) {
  const SimTime now = engine_.now();
  ++stats_.delivered;
  auto& host = hosts_[at];
  const auto outcome = host_process(host, packet, now);
  switch (outcome) {
    case HostOutcome::DeadDrop: ++stats_.delivered_to_dead; break;
    case HostOutcome::RefusedMem: ++stats_.refused; break;
    default: break;
  }
  if (hooks_.on_arrive) hooks_.on_arrive(at, packet, outcome, now);

  if (outcome == HostOutcome::CrashTriggered) {
    if (hooks_.on_crash) hooks_.on_crash(at, now);
    if (const auto& after = topo_.node(at).recovery_after) {
      engine_.schedule(now + *after, [this, at] {
        hosts_[at].recover();
        if (hooks_.on_recover) hooks_.on_recover(at, engine_.now());
      });
    }
    return;
  }
  if (outcome == HostOutcome::Accepted && packet.echo_request &&
      topo_.node(at).kind == NodeKind::Host && packet.effective_src() != at) {
    Packet reply;
    reply.src = at;
    reply.dst = packet.effective_src();
    reply.proto = packet.proto;
    reply.size = packet.size;
    reply.attack_tag = packet.attack_tag;
    inject(std::move(reply));
  }
}

SimStats Network::run_until(SimTime t_end) {
  engine_.run_until(t_end);
  return stats();
}

SimStats Network::stats() const {
  SimStats out = stats_;
  std::uint64_t queued = 0;
  for (const auto& q : queues_) queued += q.queued.size();
  out.in_flight = queued + on_wire_;
  return out;
}

}  // namespace dosim::sim
