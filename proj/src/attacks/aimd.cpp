#include "dosim/attacks/aimd.hpp"

#include <algorithm>
#include <stdexcept>

namespace dosim::attacks {

double aimd_step(AimdSender& s, AimdEvent event, SimTime now) {
  if (s.paused(now)) return s.rate;
  switch (event) {
    case AimdEvent::AckInterval:
      s.rate = std::min(s.max_rate, s.rate + s.additive_step);
      break;
    case AimdEvent::Drop:
      s.rate = std::max(s.min_rate, s.rate / 2.0);
      break;
    case AimdEvent::WindowLoss:
      s.rate = s.min_rate;
      s.paused_until = now + s.rto;
      break;
  }
  return s.rate;
}

LegitSender::LegitSender(LegitConfig config, Rng rng) : config_(config), rng_(std::move(rng)) {
  const auto& a = config_.aimd;
  if (!(a.min_rate > 0 && a.min_rate <= a.max_rate)) throw std::invalid_argument("need 0 < min_rate <= max_rate");
  if (!(a.rate >= a.min_rate && a.rate <= a.max_rate)) throw std::invalid_argument("rate outside [min_rate, max_rate]");
  if (!(a.rto > 0)) throw std::invalid_argument("rto must be > 0");
  if (a.additive_step < 0) throw std::invalid_argument("additive_step must be >= 0");
  if (!(config_.jitter >= 0 && config_.jitter < 1)) throw std::invalid_argument("jitter must lie in [0, 1)");
  last_drop_ = last_increase_ = config_.start;
}

LegitSender::Tick LegitSender::on_demand(SimTime now) {
  Tick tick{false, std::nullopt};
  const auto& a = config_.aimd;
  credit_ = std::min(1.0, credit_ + a.rate / a.max_rate);
  if (!a.paused(now) && credit_ >= 1.0 - 1e-12) {
    credit_ -= 1.0;
    tick.send = true;
  }
  const double interval = (1.0 / a.max_rate) * rng_.uniform(1.0 - config_.jitter, 1.0 + config_.jitter);
  if (now + interval < config_.stop) tick.next = now + interval;
  return tick;
}

bool LegitSender::on_resume(SimTime now) {
  if (config_.aimd.paused(now) || now >= config_.stop || credit_ < 1.0 - 1e-12) return false;
  credit_ -= 1.0;
  return true;
}

void LegitSender::on_sent(PacketId id, SimTime now) { sent_.emplace(id, InFlight{now}); }

void LegitSender::on_fate(PacketId id, bool dropped) {
  if (auto it = sent_.find(id); it != sent_.end()) {
    it->second.resolved = true;
    it->second.dropped = dropped;
  }
}

std::optional<AimdEvent> LegitSender::evaluate_span(SimTime span_start, SimTime now) {
  const SimTime span_end = span_start + kSpan;
  std::size_t sent = 0;
  std::size_t dropped = 0;
  std::optional<SimTime> first_sent;
  for (auto it = sent_.begin(); it != sent_.end();) {
    const auto& f = it->second;
    if (f.sent_at < span_start) {
      it = sent_.erase(it);  // stale; its span was already judged
      continue;
    }
    if (f.sent_at < span_end) {
      ++sent;
      if (f.resolved && f.dropped) ++dropped;
      if (!first_sent || f.sent_at < *first_sent) first_sent = f.sent_at;
      it = sent_.erase(it);
      continue;
    }
    ++it;
  }

  auto& a = config_.aimd;
  if (a.paused(now)) return std::nullopt;
  if (sent > 0 && dropped == sent) {
    // The retransmission timer was armed when the first lost packet left.
    aimd_step(a, AimdEvent::WindowLoss, *first_sent);
    last_drop_ = now;
    return AimdEvent::WindowLoss;
  }
  if (dropped > 0) {
    aimd_step(a, AimdEvent::Drop, now);
    last_drop_ = now;
    return AimdEvent::Drop;
  }
  if (now - std::max(last_drop_, last_increase_) >= kAckInterval - 1e-9) {
    last_increase_ = now;
    if (a.rate < a.max_rate) {
      aimd_step(a, AimdEvent::AckInterval, now);
      return AimdEvent::AckInterval;
    }
  }
  return std::nullopt;
}

}  // namespace dosim::attacks
