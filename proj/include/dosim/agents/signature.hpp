#pragma once

#include <optional>

#include "dosim/sim/packet.hpp"

namespace dosim::agents {

/// Signatures are the exploit kinds recognisable from a single packet.
using SignatureId = AttackKind;

/// Oversized datagram -> PingOfDeath; effective source equal to destination -> Land.
inline std::optional<SignatureId> signature_match(const sim::Packet& packet) noexcept {
  if (packet.size > sim::kMaxLegalPacketSize) return AttackKind::PingOfDeath;
  if (packet.effective_src() == packet.dst) return AttackKind::Land;
  return std::nullopt;
}

}  // namespace dosim::agents
