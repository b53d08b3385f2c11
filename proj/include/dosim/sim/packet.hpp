#pragma once

#include <cstdint>
#include <optional>

#include "dosim/types.hpp"

namespace dosim::sim {

/// Largest legal IP datagram; anything above is malformed.
inline constexpr std::uint32_t kMaxLegalPacketSize = 65535;

struct Packet {
  PacketId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::optional<NodeId> spoofed_src;
  Proto proto = Proto::Udp;
  std::uint32_t size = 1;
  SimTime created_at = 0.0;
  /// Ground-truth label for metrics. Agents never read it.
  std::optional<AttackKind> attack_tag;
  /// Echo request: an up host that accepts it answers the effective source.
  bool echo_request = false;

  NodeId effective_src() const noexcept { return spoofed_src.value_or(src); }
  FlowKey flow_key() const noexcept { return FlowKey{effective_src(), dst, proto}; }
};

}  // namespace dosim::sim
