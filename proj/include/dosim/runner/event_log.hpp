#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dosim/agents/dra.hpp"
#include "dosim/sim/network.hpp"
#include "dosim/trust/reputation.hpp"

namespace dosim::runner {

struct DropRecord {
  PacketId packet = 0;
  FlowKey flow;
  std::uint32_t size = 0;
  sim::DropReason reason = sim::DropReason::Queue;
  NodeId node = 0;
  std::optional<LinkId> link;
  std::optional<agents::RuleId> rule;
  double measured_rate = 0.0;
  std::optional<AttackKind> truth;
};

struct AlarmRecord {
  AgentId sensor;
  AgentId dra;
  agents::Alarm alarm;
};

struct ReputationRecord {
  AgentId from;
  AgentId to;
  trust::ReputationMessage msg;
};

struct ClassificationRecord {
  agents::ClassificationChange change;
};

struct RuleInstallRecord {
  AgentId ne;
  agents::FilterRule rule;
  bool refreshed = false;
};

struct HostEventRecord {
  NodeId host = 0;
  bool crashed = true;  // false: recovered
};

struct AgentErrorRecord {
  agents::AgentError error;
};

/// Per-second traffic tallies, written once at the end of a run.
struct TrafficRecord {
  std::int64_t second = 0;
  std::uint64_t legit_offered = 0;
  std::uint64_t legit_delivered = 0;  // by creation second
  std::uint64_t attack_at_victim = 0;
  std::uint64_t attack_emitted = 0;
};

/// Ground truth of one flow, written once at the end of a run.
struct FlowTruthRecord {
  FlowKey flow;
  bool attack = false;
  std::uint64_t packets = 0;
};

struct StatsRecord {
  sim::SimStats stats;
};

using RecordBody = std::variant<DropRecord, AlarmRecord, ReputationRecord, ClassificationRecord, RuleInstallRecord,
                                HostEventRecord, AgentErrorRecord, TrafficRecord, FlowTruthRecord, StatsRecord>;

struct LogRecord {
  SimTime at = 0.0;
  RecordBody body;
};

/// Records an agent acted on or produced, as opposed to physics and truth.
bool is_decision(const RecordBody& body) noexcept;

/// Append-only, time-ordered run log.
class EventLog {
 public:
  /// Throws std::logic_error if `at` precedes the last record.
  void append(SimTime at, RecordBody body);

  const std::vector<LogRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  template <typename T>
  std::vector<std::pair<SimTime, const T*>> all() const {
    std::vector<std::pair<SimTime, const T*>> out;
    for (const auto& r : records_) {
      if (const auto* p = std::get_if<T>(&r.body)) out.emplace_back(r.at, p);
    }
    return out;
  }

 private:
  std::vector<LogRecord> records_;
};

/// One text line per record; node ids are rendered by name.
std::string render_record(const LogRecord& record, const sim::Topology& topo);
std::string render_log(const EventLog& log, const sim::Topology& topo);

/// FNV-1a over the rendered log.
std::uint64_t log_hash(const EventLog& log, const sim::Topology& topo);

}  // namespace dosim::runner
