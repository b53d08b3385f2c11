#include "dosim/attacks/generators.hpp"

#include <cmath>

#include "dosim/attacks/taxonomy.hpp"

namespace dosim::attacks {

namespace {

constexpr std::uint32_t kPingOfDeathSize = 70000;
constexpr std::uint32_t kLandSize = 60;

bool is_pulse(AttackKind k) { return k == AttackKind::Shrew || k == AttackKind::RoQ; }
bool is_exploit(AttackKind k) { return k == AttackKind::PingOfDeath || k == AttackKind::Land; }

}  // namespace

void GeneratorState::validate() const {
  if (sources.empty()) throw std::invalid_argument("attack needs at least one source");
  if (!(stop > start)) throw std::invalid_argument("attack needs stop > start");
  const bool reflector = taxonomy_of(kind).scheme == Scheme::Reflector;
  if (reflector != !reflectors.empty()) {
    throw std::invalid_argument(reflector ? "reflector attack needs reflectors"
                                          : "only reflector attacks take reflectors");
  }
  if (is_pulse(kind)) {
    if (!burst) throw std::invalid_argument("pulse attack needs a burst");
    if (!(burst->length > 0 && burst->length < burst->period)) {
      throw std::invalid_argument("burst needs 0 < length < period");
    }
    if (!(burst->burst_rate > 0)) throw std::invalid_argument("burst_rate must be > 0");
  } else if (burst) {
    throw std::invalid_argument("only Shrew/RoQ take a burst");
  }
  if (is_exploit(kind)) {
    if (repeat < 0) throw std::invalid_argument("repeat must be >= 0");
  } else if (!(rate > 0)) {
    throw std::invalid_argument("rate must be > 0");
  }
  if (size == 0) throw std::invalid_argument("packet size must be >= 1");
}

double shrew_schedule(const BurstSpec& burst, SimTime start, SimTime now) noexcept {
  if (now < start) return 0.0;
  return std::fmod(now - start, burst.period) < burst.length ? burst.burst_rate : 0.0;
}

AttackGenerator::AttackGenerator(GeneratorState state) : state_(std::move(state)) { state_.validate(); }

SimTime AttackGenerator::tick_time(std::uint64_t j) const {
  const auto jd = static_cast<double>(j);
  if (is_exploit(state_.kind)) return state_.start + jd * state_.repeat;
  if (is_pulse(state_.kind)) {
    const auto& b = *state_.burst;
    const double per_burst = b.burst_rate * b.length;
    const double m = std::floor((jd + 1e-9) / per_burst);
    const double offset = (jd - m * per_burst) / b.burst_rate;
    return state_.start + m * b.period + offset;
  }
  return state_.start + jd / state_.rate;
}

std::optional<SimTime> AttackGenerator::first() const {
  const auto t = tick_time(0);
  if (t >= state_.stop) return std::nullopt;
  return t;
}

sim::Packet flood_packet(const GeneratorState& gen, NodeId source) {
  sim::Packet p;
  p.src = source;
  p.dst = gen.victim;
  p.size = gen.size;
  p.attack_tag = gen.kind;
  p.proto = gen.kind == AttackKind::IcmpFlood ? Proto::Icmp : Proto::Udp;
  return p;
}

sim::Packet exploit_packet(const GeneratorState& gen, NodeId source) {
  sim::Packet p;
  p.src = source;
  p.dst = gen.victim;
  p.attack_tag = gen.kind;
  if (gen.kind == AttackKind::PingOfDeath) {
    p.proto = Proto::Icmp;
    p.size = kPingOfDeathSize;
  } else {
    p.proto = Proto::TcpLike;
    p.size = kLandSize;
    p.spoofed_src = gen.victim;
  }
  return p;
}

std::vector<sim::Packet> AttackGenerator::packets_for(std::uint64_t j) const {
  const NodeId source = state_.sources[j % state_.sources.size()];
  std::vector<sim::Packet> out;
  switch (state_.kind) {
    case AttackKind::UdpFlood:
    case AttackKind::IcmpFlood:
    case AttackKind::Shrew:
    case AttackKind::RoQ:
      out.push_back(flood_packet(state_, source));
      break;
    case AttackKind::Smurf:
    case AttackKind::Fraggle:
      for (NodeId reflector : state_.reflectors) {
        sim::Packet p;
        p.src = source;
        p.dst = reflector;
        p.spoofed_src = state_.victim;
        p.proto = state_.kind == AttackKind::Smurf ? Proto::Icmp : Proto::Udp;
        p.size = state_.size;
        p.attack_tag = state_.kind;
        p.echo_request = true;
        out.push_back(p);
      }
      break;
    case AttackKind::PingOfDeath:
    case AttackKind::Land:
      out.push_back(exploit_packet(state_, source));
      break;
  }
  return out;
}

Emission AttackGenerator::emit(SimTime now) {
  Emission out;
  if (now >= state_.stop || now < state_.start) return out;
  out.packets = packets_for(tick_);
  ++tick_;
  if (is_exploit(state_.kind) && state_.repeat == 0) return out;
  const auto next = tick_time(tick_);
  if (next < state_.stop) out.next = next;
  return out;
}

}  // namespace dosim::attacks
