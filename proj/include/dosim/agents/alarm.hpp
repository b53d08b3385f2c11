#pragma once

#include <optional>

#include "dosim/types.hpp"

namespace dosim::agents {

enum class AlarmKind : std::uint8_t { ResourceDepletion, Signature };

/// Intrusion signal about one host. Signature alarms always carry severity 1.
struct Alarm {
  NodeId host = 0;
  SimTime at = 0.0;
  double severity = 0.0;  // [0, 1]
  AlarmKind kind = AlarmKind::ResourceDepletion;
  std::optional<AttackKind> signature;

  static Alarm resource(NodeId host, SimTime at, double severity) {
    return Alarm{host, at, severity, AlarmKind::ResourceDepletion, std::nullopt};
  }
  static Alarm matched(NodeId host, SimTime at, AttackKind signature) {
    return Alarm{host, at, 1.0, AlarmKind::Signature, signature};
  }

  bool operator==(const Alarm&) const = default;
};

}  // namespace dosim::agents
