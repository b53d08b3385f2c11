#include "dosim/flows/flow_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dosim::flows {

FlowTable::FlowTable(FlowTableConfig config, SimTime window_start)
    : config_(config), window_start_(window_start) {
  if (!(config_.window_len > 0)) throw std::invalid_argument("window_len must be > 0");
  if (!(config_.idle_timeout > 0)) throw std::invalid_argument("idle_timeout must be > 0");
}

WindowStats FlowTable::update_flow(const sim::Packet& packet, SimTime now) {
  if (now < window_start_ || now >= window_end()) {
    throw WindowError("observation at t=" + std::to_string(now) + " outside window [" +
                      std::to_string(window_start_) + ", " + std::to_string(window_end()) + ")");
  }
  const auto key = packet.flow_key();
  auto [it, inserted] = flows_.try_emplace(key);
  auto& entry = it->second;
  if (inserted) {
    entry.stats.flow_key = key;
    entry.stats.window_start = window_start_;
    entry.stats.window_len = config_.window_len;
  }
  auto index = static_cast<std::size_t>(
      std::floor(static_cast<double>(kSubwindows) * (now - window_start_) / config_.window_len));
  index = std::min(index, kSubwindows - 1);

  entry.stats.pkt_count += 1;
  entry.stats.byte_sum += packet.size;
  entry.stats.subwindow_counts[index] += 1;
  entry.last_seen = now;

  auto& sources = fanin_[key.dst];
  sources.insert(key.src);

  WindowStats snapshot = entry.stats;
  snapshot.dst_fanin = sources.size();
  return snapshot;
}

WindowReport FlowTable::close_window(SimTime now) {
  if (now < window_end() - 1e-9) {
    throw WindowError("close_window at t=" + std::to_string(now) + " before window end " +
                      std::to_string(window_end()));
  }
  WindowReport out;
  for (auto& [key, entry] : flows_) {
    if (entry.stats.pkt_count == 0) continue;
    entry.stats.dst_fanin = fanin_[key.dst].size();
    if (auto features = extract_features(entry.stats)) out.reports.emplace_back(key, *features);
  }
  for (auto it = flows_.begin(); it != flows_.end();) {
    if (now - it->second.last_seen >= config_.idle_timeout) {
      out.closed.push_back(it->first);
      it = flows_.erase(it);
    } else {
      it->second.stats = WindowStats{it->first, now, config_.window_len, 0, 0, {}, 0};
      ++it;
    }
  }
  fanin_.clear();
  window_start_ = now;
  return out;
}

}  // namespace dosim::flows
