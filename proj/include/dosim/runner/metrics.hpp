#pragma once

#include <optional>

#include "dosim/runner/event_log.hpp"
#include "dosim/runner/scenario.hpp"

namespace dosim::runner {

struct GoodputRatio {
  double before = 1.0;
  double during = 1.0;
  double after = 1.0;
};

struct MetricsReport {
  std::optional<double> detection_latency;
  std::optional<double> mitigation_latency;
  double false_positive_rate = 0.0;
  GoodputRatio goodput_ratio;
  sim::SimStats conservation;
  std::uint64_t alarms = 0;
  std::uint64_t rules = 0;
};

/// Legitimate delivered / offered over the traffic seconds s with
/// from <= s < to. A span without offered traffic counts as 1.
double goodput_over(const EventLog& log, SimTime from, SimTime to);

/// Goodput phases split on second starts: before < attack start <= during <
/// first rule install <= after.
MetricsReport compute_metrics(const EventLog& log, const Scenario& scenario);

}  // namespace dosim::runner
