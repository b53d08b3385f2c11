#pragma once

#include <map>
#include <optional>

#include "dosim/rng.hpp"
#include "dosim/types.hpp"

namespace dosim::attacks {

/// Minimal congestion-responsive legitimate sender.
struct AimdSender {
  NodeId src = 0;
  NodeId dst = 0;
  double rate = 50.0;  // packets/s, always within [min_rate, max_rate]
  double min_rate = 1.0;
  double max_rate = 50.0;
  double additive_step = 10.0;  // packets/s added per clean second
  double rto = 1.0;
  SimTime paused_until = 0.0;

  bool paused(SimTime now) const noexcept { return now < paused_until; }
};

enum class AimdEvent : std::uint8_t {
  AckInterval,  // a full second without drops
  Drop,         // some loss
  WindowLoss,   // every packet of a 100 ms span lost
};

/// Applies one congestion event. A paused sender ignores events.
double aimd_step(AimdSender& sender, AimdEvent event, SimTime now);

struct LegitConfig {
  AimdSender aimd;
  Proto proto = Proto::TcpLike;
  std::uint32_t size = 1000;
  SimTime start = 0.0;
  SimTime stop = 0.0;
  double jitter = 0.1;  // relative spread of the demand tick interval
};

/// Drives an AimdSender from application demand. Demand arrives at max_rate
/// (jittered); the current AIMD rate decides how much of it is actually sent.
/// Loss is judged per 100 ms span of send times once the span's packets have
/// had time to resolve.
class LegitSender {
 public:
  static constexpr double kSpan = 0.1;
  static constexpr double kAckInterval = 1.0;

  LegitSender(LegitConfig config, Rng rng);

  const LegitConfig& config() const noexcept { return config_; }
  const AimdSender& aimd() const noexcept { return config_.aimd; }

  struct Tick {
    bool send;
    std::optional<SimTime> next;
  };
  /// A unit of demand at `now`.
  Tick on_demand(SimTime now);

  /// Called when a pause ends; true if a held-back packet should go out now.
  bool on_resume(SimTime now);

  void on_sent(PacketId id, SimTime now);
  void on_fate(PacketId id, bool dropped);

  /// Judges the span [span_start, span_start + kSpan). Returns the event
  /// applied, if any.
  std::optional<AimdEvent> evaluate_span(SimTime span_start, SimTime now);

 private:
  struct InFlight {
    SimTime sent_at;
    bool resolved = false;
    bool dropped = false;
  };

  LegitConfig config_;
  Rng rng_;
  double credit_ = 0.0;
  std::map<PacketId, InFlight> sent_;
  SimTime last_drop_ = 0.0;
  SimTime last_increase_ = 0.0;
};

}  // namespace dosim::attacks
