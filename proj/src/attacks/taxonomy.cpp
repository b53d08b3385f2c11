#include "dosim/attacks/taxonomy.hpp"

namespace dosim::attacks {

std::string_view to_string(AttackType v) noexcept {
  return v == AttackType::Distributed ? "distributed" : "non_distributed";
}

std::string_view to_string(Direction v) noexcept {
  return v == Direction::NetworkResources ? "network_resources" : "target_resources";
}

std::string_view to_string(Scheme v) noexcept {
  switch (v) {
    case Scheme::Direct: return "direct";
    case Scheme::Reflector: return "reflector";
    case Scheme::Hidden: return "hidden";
  }
  return "?";
}

std::string_view to_string(Method v) noexcept {
  switch (v) {
    case Method::Targeted: return "targeted";
    case Method::Consumption: return "consumption";
    case Method::Exploitive: return "exploitive";
  }
  return "?";
}

AttackTaxonomy taxonomy_of(AttackKind kind) noexcept {
  switch (kind) {
    case AttackKind::UdpFlood:
    case AttackKind::IcmpFlood:
      return {AttackType::Distributed, Direction::NetworkResources, Scheme::Direct, Method::Consumption};
    case AttackKind::Smurf:
    case AttackKind::Fraggle:
      return {AttackType::Distributed, Direction::NetworkResources, Scheme::Reflector, Method::Consumption};
    case AttackKind::PingOfDeath:
    case AttackKind::Land:
      return {AttackType::NonDistributed, Direction::TargetResources, Scheme::Direct, Method::Exploitive};
    case AttackKind::Shrew:
    case AttackKind::RoQ:
      return {AttackType::Distributed, Direction::TargetResources, Scheme::Hidden, Method::Consumption};
  }
  return {AttackType::Distributed, Direction::NetworkResources, Scheme::Direct, Method::Consumption};
}

std::string describe(AttackKind kind) {
  const auto t = taxonomy_of(kind);
  std::string out(dosim::to_string(kind));
  for (auto part : {to_string(t.attack_type), to_string(t.direction), to_string(t.scheme), to_string(t.method)}) {
    out += ' ';
    out += part;
  }
  return out;
}

}  // namespace dosim::attacks
