#pragma once

#include <string>
#include <string_view>

#include "dosim/types.hpp"

namespace dosim::attacks {

enum class AttackType : std::uint8_t { Distributed, NonDistributed };
enum class Direction : std::uint8_t { NetworkResources, TargetResources };
enum class Scheme : std::uint8_t { Direct, Reflector, Hidden };
enum class Method : std::uint8_t { Targeted, Consumption, Exploitive };

/// Four-axis classification of a denial-of-service attack.
struct AttackTaxonomy {
  AttackType attack_type;
  Direction direction;
  Scheme scheme;
  Method method;

  bool operator==(const AttackTaxonomy&) const = default;
};

std::string_view to_string(AttackType v) noexcept;
std::string_view to_string(Direction v) noexcept;
std::string_view to_string(Scheme v) noexcept;
std::string_view to_string(Method v) noexcept;

AttackTaxonomy taxonomy_of(AttackKind kind) noexcept;

/// "<kind> <type> <direction> <scheme> <method>", as printed by list-attacks.
std::string describe(AttackKind kind);

}  // namespace dosim::attacks
