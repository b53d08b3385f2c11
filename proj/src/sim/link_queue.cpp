#include "dosim/sim/link_queue.hpp"

#include <algorithm>

namespace dosim::sim {

EnqueueResult enqueue_packet(LinkQueue& queue, const Packet& packet, SimTime now, const Link& link) {
  if (queue.queued.size() >= link.queue_limit) return QueueFull{};
  const SimTime depart = std::max(now, queue.busy_until) + 1.0 / link.capacity;
  queue.busy_until = depart;
  queue.queued.push_back(packet);
  return Enqueued{depart};
}

}  // namespace dosim::sim
