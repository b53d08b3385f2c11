#pragma once

#include <cstdint>
#include <optional>

#include "dosim/runner/event_log.hpp"
#include "dosim/runner/metrics.hpp"
#include "dosim/runner/scenario.hpp"

namespace dosim::runner {

struct RunOptions {
  /// Overrides the scenario seed.
  std::optional<std::uint64_t> seed;
  /// Removes attack_tag from every packet before it enters the network, so
  /// agents provably never see ground truth. Metrics lose their labels.
  bool strip_tags = false;
};

struct RunResult {
  std::uint64_t seed = 0;
  MetricsReport report;
  EventLog log;
  std::uint64_t log_hash = 0;
};

/// Builds the network and agents, runs to the scenario duration and computes
/// metrics. Agent misbehaviour is logged; it never aborts the run.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace dosim::runner
