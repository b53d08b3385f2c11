#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dosim/flows/features.hpp"
#include "dosim/sim/packet.hpp"

namespace dosim::flows {

class WindowError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FlowTableConfig {
  double window_len = 1.0;
  double idle_timeout = 5.0;
};

/// What a sensor reports when a window closes.
struct WindowReport {
  std::vector<std::pair<FlowKey, FeatureVector>> reports;
  /// Flows evicted after idle_timeout without packets.
  std::vector<FlowKey> closed;
};

/// Per-flow windowed accounting owned by one network sensor.
class FlowTable {
 public:
  explicit FlowTable(FlowTableConfig config = {}, SimTime window_start = 0.0);

  /// Counts the packet in its subwindow. Throws WindowError if `now` lies
  /// outside [window_start, window_start + window_len).
  WindowStats update_flow(const sim::Packet& packet, SimTime now);

  /// Emits one vector per flow seen this window (ascending FlowKey), evicts
  /// idle flows and restarts the window at `now`.
  WindowReport close_window(SimTime now);

  SimTime window_start() const noexcept { return window_start_; }
  SimTime window_end() const noexcept { return window_start_ + config_.window_len; }
  const FlowTableConfig& config() const noexcept { return config_; }
  std::size_t tracked_flows() const noexcept { return flows_.size(); }

 private:
  struct Entry {
    WindowStats stats;
    SimTime last_seen = 0.0;
  };

  FlowTableConfig config_;
  SimTime window_start_;
  std::map<FlowKey, Entry> flows_;
  std::map<NodeId, std::set<NodeId>> fanin_;
};

}  // namespace dosim::flows
