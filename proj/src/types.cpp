#include "dosim/types.hpp"

namespace dosim {

std::string_view to_string(Proto proto) noexcept {
  switch (proto) {
    case Proto::Udp: return "UDP";
    case Proto::Icmp: return "ICMP";
    case Proto::TcpLike: return "TCPLIKE";
  }
  return "?";
}

std::string_view to_string(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::UdpFlood: return "UdpFlood";
    case AttackKind::IcmpFlood: return "IcmpFlood";
    case AttackKind::Smurf: return "Smurf";
    case AttackKind::Fraggle: return "Fraggle";
    case AttackKind::PingOfDeath: return "PingOfDeath";
    case AttackKind::Land: return "Land";
    case AttackKind::Shrew: return "Shrew";
    case AttackKind::RoQ: return "RoQ";
  }
  return "?";
}

std::optional<Proto> parse_proto(std::string_view text) noexcept {
  for (auto p : {Proto::Udp, Proto::Icmp, Proto::TcpLike}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<AttackKind> parse_attack_kind(std::string_view text) noexcept {
  for (auto k : kAllAttackKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

}  // namespace dosim
