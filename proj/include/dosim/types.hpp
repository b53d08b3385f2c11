#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace dosim {

/// Simulated time in seconds.
using SimTime = double;
using NodeId = std::uint32_t;
using LinkId = std::uint32_t;
using PacketId = std::uint64_t;
using AgentId = std::string;

enum class Proto : std::uint8_t { Udp, Icmp, TcpLike };

enum class AttackKind : std::uint8_t {
  UdpFlood,
  IcmpFlood,
  Smurf,
  Fraggle,
  PingOfDeath,
  Land,
  Shrew,
  RoQ,
};

inline constexpr std::array<AttackKind, 8> kAllAttackKinds{
    AttackKind::UdpFlood, AttackKind::IcmpFlood,   AttackKind::Smurf, AttackKind::Fraggle,
    AttackKind::PingOfDeath, AttackKind::Land, AttackKind::Shrew, AttackKind::RoQ};

std::string_view to_string(Proto proto) noexcept;
std::string_view to_string(AttackKind kind) noexcept;
std::optional<Proto> parse_proto(std::string_view text) noexcept;
std::optional<AttackKind> parse_attack_kind(std::string_view text) noexcept;

/// Unidirectional flow identity. `src` is the effective (possibly spoofed) source.
struct FlowKey {
  NodeId src = 0;
  NodeId dst = 0;
  Proto proto = Proto::Udp;

  auto operator<=>(const FlowKey&) const = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& key) const noexcept {
    std::uint64_t h = (std::uint64_t{key.src} << 32) ^ (std::uint64_t{key.dst} << 2) ^
                      static_cast<std::uint64_t>(key.proto);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace dosim
