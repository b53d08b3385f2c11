#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dosim/sim/packet.hpp"

namespace dosim::attacks {

/// On/off pulse train for low-rate attacks.
struct BurstSpec {
  double period = 1.0;       // T, seconds
  double length = 0.1;       // L, seconds, 0 < L < T
  double burst_rate = 1000;  // packets/s while on
};

struct GeneratorState {
  AttackKind kind = AttackKind::UdpFlood;
  std::vector<NodeId> sources;
  NodeId victim = 0;
  std::vector<NodeId> reflectors;  // reflector schemes only
  double rate = 1000.0;            // packets/s (trigger rate for reflector schemes)
  std::optional<BurstSpec> burst;  // shrew / RoQ only
  SimTime start = 0.0;
  SimTime stop = 0.0;
  std::uint32_t size = 500;
  double repeat = 5.0;             // exploit resend interval; 0 sends once

  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
};

struct Emission {
  std::vector<sim::Packet> packets;
  std::optional<SimTime> next;
};

/// Rate of a pulse train at `now`: burst_rate while (now - start) mod T < L.
double shrew_schedule(const BurstSpec& burst, SimTime start, SimTime now) noexcept;

/// Deterministic attack source. Emission j happens at a fixed instant derived
/// from (state, j) alone; packets rotate over the sources.
///
/// - floods: aggregate rate, so each source sends every |sources|/rate s;
/// - reflector schemes: each tick sends one echo request to every reflector
///   with the victim as spoofed source;
/// - pulse trains: ticks are spaced 1/burst_rate in accumulated on-time, so
///   emissions over n periods are n * burst_rate * L within one packet;
/// - exploits: one malformed packet every `repeat` seconds.
class AttackGenerator {
 public:
  explicit AttackGenerator(GeneratorState state);

  const GeneratorState& state() const noexcept { return state_; }

  /// Time of the first emission, if any falls in [start, stop).
  std::optional<SimTime> first() const;

  /// Packets due at tick time `now`, and the time of the next tick.
  Emission emit(SimTime now);

  /// Instant of the j-th tick.
  SimTime tick_time(std::uint64_t j) const;

 private:
  std::vector<sim::Packet> packets_for(std::uint64_t j) const;

  GeneratorState state_;
  std::uint64_t tick_ = 0;
};

/// Helpers for the per-kind packet shapes.
sim::Packet flood_packet(const GeneratorState& gen, NodeId source);
sim::Packet exploit_packet(const GeneratorState& gen, NodeId source);

}  // namespace dosim::attacks
