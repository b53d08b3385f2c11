#pragma once

#include <span>
#include <vector>

#include "dosim/agents/alarm.hpp"
#include "dosim/types.hpp"

namespace dosim::trust {

/// One observation of connection trustfulness: 1 benign evidence, 0 malicious.
struct FeedbackObservation {
  FlowKey flow_key;
  double o = 1.0;
  NodeId source_host = 0;
  SimTime at = 0.0;
};

struct FlowStatus {
  FlowKey key;
  bool closed_cleanly = false;
};

/// Turns host-sensor alarms into per-flow trust observations. A flow towards a
/// host alarmed within [now - horizon, now] gets o = max(0, 1 - sum of that
/// host's severities); a cleanly closed flow towards an unalarmed host gets
/// o = 1. Other flows produce nothing.
std::vector<FeedbackObservation> aggregate_feedback(std::span<const agents::Alarm> alarms,
                                                    std::span<const FlowStatus> flows, SimTime now,
                                                    double horizon = 5.0);

}  // namespace dosim::trust
