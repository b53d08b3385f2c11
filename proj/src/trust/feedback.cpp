#include "dosim/trust/feedback.hpp"

#include <algorithm>
#include <map>

namespace dosim::trust {

std::vector<FeedbackObservation> aggregate_feedback(std::span<const agents::Alarm> alarms,
                                                    std::span<const FlowStatus> flows, SimTime now,
                                                    double horizon) {
  std::map<NodeId, double> severity;
  for (const auto& alarm : alarms) {
    if (alarm.at >= now - horizon && alarm.at <= now) severity[alarm.host] += alarm.severity;
  }
  std::vector<FeedbackObservation> out;
  for (const auto& flow : flows) {
    const auto host = flow.key.dst;
    if (auto it = severity.find(host); it != severity.end()) {
      out.push_back({flow.key, std::max(0.0, 1.0 - it->second), host, now});
    } else if (flow.closed_cleanly) {
      out.push_back({flow.key, 1.0, host, now});
    }
  }
  return out;
}

}  // namespace dosim::trust
