#include "dosim/agents/sensors.hpp"

#include <algorithm>

namespace dosim::agents {

NetworkSensor::NetworkSensor(AgentId id, AgentId dra, flows::FlowTableConfig config, SimTime start)
    : id_(std::move(id)), dra_(std::move(dra)), table_(config, start) {}

std::optional<Alarm> NetworkSensor::observe(const sim::Packet& packet, SimTime now) {
  if (now >= table_.window_end()) {
    early_.emplace_back(packet, now);
  } else {
    table_.update_flow(packet, now);
  }
  if (auto sig = signature_match(packet)) return Alarm::matched(packet.dst, now, *sig);
  return std::nullopt;
}

FlowReport NetworkSensor::step(SimTime now) {
  auto window = table_.close_window(now);
  auto pending = std::move(early_);
  early_.clear();
  for (const auto& [packet, t] : pending) {
    if (t >= table_.window_end()) {
      early_.emplace_back(packet, t);
    } else {
      table_.update_flow(packet, t);
    }
  }
  return FlowReport{std::move(window.reports), std::move(window.closed)};
}

HostSensor::HostSensor(AgentId id, AgentId dra, NodeId host, HostSensorConfig config)
    : id_(std::move(id)), dra_(std::move(dra)), host_(host), config_(config) {}

std::optional<Alarm> HostSensor::sample(const sim::HostState& state, SimTime now) {
  if (state.status() == sim::HostStatus::Crashed) {
    above_since_.reset();
    return std::nullopt;
  }
  constexpr double eps = 1e-9;
  const double util = state.cpu_util();
  if (util > config_.util_threshold) {
    if (!above_since_) above_since_ = now;
  } else {
    above_since_.reset();
  }
  const bool sustained = above_since_ && now - *above_since_ >= config_.sustain - eps;
  const bool mem_full = state.mem_used() >= state.mem_slots();
  if (!sustained && !mem_full) return std::nullopt;
  if (last_alarm_ && now - *last_alarm_ < config_.min_gap - eps) return std::nullopt;

  double severity = 0.0;
  if (sustained) {
    severity = std::clamp((util - config_.util_threshold) / (1.0 - config_.util_threshold), 0.0, 1.0);
  }
  if (mem_full) severity = 1.0;
  last_alarm_ = now;
  return Alarm::resource(host_, now, severity);
}

Alarm HostSensor::on_crash(SimTime now) {
  last_alarm_ = now;
  above_since_.reset();
  return Alarm::resource(host_, now, 1.0);
}

}  // namespace dosim::agents
