#pragma once

#include <deque>
#include <variant>

#include "dosim/sim/packet.hpp"
#include "dosim/sim/topology.hpp"

namespace dosim::sim {

/// Drop-tail FIFO for one direction of a link. A packet stays queued until
/// its departure instant, so the packet in service counts against the limit.
struct LinkQueue {
  LinkId link = 0;
  std::deque<Packet> queued;
  SimTime busy_until = 0.0;
};

struct Enqueued {
  SimTime depart;
};
struct QueueFull {};

using EnqueueResult = std::variant<Enqueued, QueueFull>;

/// Departs at max(now, busy_until) + 1/capacity, or drops when full.
EnqueueResult enqueue_packet(LinkQueue& queue, const Packet& packet, SimTime now, const Link& link);

}  // namespace dosim::sim
