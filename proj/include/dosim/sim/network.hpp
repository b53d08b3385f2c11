#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dosim/sim/engine.hpp"
#include "dosim/sim/host.hpp"
#include "dosim/sim/link_queue.hpp"
#include "dosim/sim/packet.hpp"
#include "dosim/sim/topology.hpp"

namespace dosim::sim {

/// Packet accounting. After any run:
/// injected == delivered + queue_dropped + filter_dropped + in_flight.
struct SimStats {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t queue_dropped = 0;
  std::uint64_t filter_dropped = 0;
  std::uint64_t in_flight = 0;
  // Breakdown of `delivered`.
  std::uint64_t delivered_to_dead = 0;
  std::uint64_t refused = 0;

  bool conserved() const noexcept {
    return injected == delivered + queue_dropped + filter_dropped + in_flight;
  }
};

enum class DropReason : std::uint8_t { Queue, Filter };

/// Verdict of a network element on a transiting packet.
struct FilterHit {
  std::uint64_t rule = 0;
  double measured_rate = 0.0;
};

/// Topology, routes, link queues and host resources driven by an Engine.
/// Observers plug in through Hooks; none of them may mutate the network
/// except through inject().
class Network {
 public:
  struct Hooks {
    /// Consulted at kind=ne nodes before a packet is queued on the next link.
    std::function<std::optional<FilterHit>(NodeId, const Packet&, SimTime)> filter;
    /// A packet left a link queue and is now on the wire.
    std::function<void(LinkId, const Packet&, SimTime)> on_transmit;
    std::function<void(const Packet&, DropReason, NodeId at, std::optional<LinkId>,
                       std::optional<FilterHit>, SimTime)>
        on_drop;
    std::function<void(NodeId, const Packet&, HostOutcome, SimTime)> on_arrive;
    std::function<void(NodeId, SimTime)> on_crash;
    std::function<void(NodeId, SimTime)> on_recover;
  };

  Network(Engine& engine, Topology topology, double idle_timeout = 5.0);

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  Hooks& hooks() noexcept { return hooks_; }

  /// Id the next injected packet will receive.
  PacketId next_id() const noexcept { return next_packet_; }

  /// Injects at the packet's physical source at the engine's current time.
  /// Assigns id and created_at. Returns the id, or nullopt when the source is a
  /// crashed host (crashed hosts emit nothing).
  std::optional<PacketId> inject(Packet packet);

  SimStats run_until(SimTime t_end);

  SimStats stats() const;
  const Topology& topology() const noexcept { return topo_; }
  const RoutingTable& routes() const noexcept { return routes_; }
  Engine& engine() noexcept { return engine_; }
  HostState& host(NodeId id) { return hosts_.at(id); }
  const HostState& host(NodeId id) const { return hosts_.at(id); }
  const LinkQueue& queue(LinkId link, int dir) const { return queues_.at(2 * link + dir); }

 private:
  void arrive(NodeId at, Packet packet);
  void deliver(NodeId at, Packet packet);
  void depart(LinkId link, int dir);

  Engine& engine_;
  Topology topo_;
  RoutingTable routes_;
  std::vector<LinkQueue> queues_;
  std::vector<HostState> hosts_;
  Hooks hooks_;
  SimStats stats_;
  std::uint64_t on_wire_ = 0;
  PacketId next_packet_ = 1;
};

}  // namespace dosim::sim
