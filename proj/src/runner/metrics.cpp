#include "dosim/runner/metrics.hpp"

#include <limits>
#include <map>
#include <set>

namespace dosim::runner {

double goodput_over(const EventLog& log, SimTime from, SimTime to) {
  std::uint64_t offered = 0;
  std::uint64_t delivered = 0;
  for (const auto& [at, t] : log.all<TrafficRecord>()) {
    const auto s = static_cast<double>(t->second);
    if (s >= from && s < to) {
      offered += t->legit_offered;
      delivered += t->legit_delivered;
    }
  }
  if (offered == 0) return 1.0;
  return std::min(1.0, static_cast<double>(delivered) / static_cast<double>(offered));
}

MetricsReport compute_metrics(const EventLog& log, const Scenario& scenario) {
  MetricsReport m;
  std::map<FlowKey, bool> truth;
  for (const auto& [at, f] : log.all<FlowTruthRecord>()) truth[f->flow] = f->attack;

  const auto start = scenario.attack_start();
  if (start) {
    for (const auto& [at, c] : log.all<ClassificationRecord>()) {
      const auto& ch = c->change;
      if (at < *start || ch.shadow || ch.cls != trust::TrustClass::Malicious || ch.members.empty()) continue;
      std::size_t attack = 0;
      for (const auto& key : ch.members) {
        auto it = truth.find(key);
        if (it != truth.end() && it->second) ++attack;
      }
      if (2 * attack > ch.members.size()) {
        m.detection_latency = at - *start;
        break;
      }
    }
  }

  std::optional<SimTime> install;
  std::set<agents::RuleId> rules;
  for (const auto& [at, r] : log.all<RuleInstallRecord>()) {
    if (!install) install = at;
    rules.insert(r->rule.id);
  }
  m.rules = rules.size();
  if (start && install && *install >= *start) m.mitigation_latency = *install - *start;

  std::set<FlowKey> blocked;
  for (const auto& [at, d] : log.all<DropRecord>()) {
    if (d->reason == sim::DropReason::Filter) blocked.insert(d->flow);
  }
  std::size_t legit = 0;
  std::size_t legit_blocked = 0;
  for (const auto& [key, attack] : truth) {
    if (attack) continue;
    ++legit;
    if (blocked.contains(key)) ++legit_blocked;
  }
  m.false_positive_rate = legit == 0 ? 0.0 : static_cast<double>(legit_blocked) / static_cast<double>(legit);

  constexpr double inf = std::numeric_limits<double>::infinity();
  const double attack_at = start.value_or(inf);
  const double mitigate_at = install && *install >= attack_at ? *install : inf;
  m.goodput_ratio.before = goodput_over(log, -inf, attack_at);
  m.goodput_ratio.during = goodput_over(log, attack_at, mitigate_at);
  m.goodput_ratio.after = goodput_over(log, mitigate_at, inf);

  for (const auto& [at, s] : log.all<StatsRecord>()) m.conservation = s->stats;
  m.alarms = log.all<AlarmRecord>().size();
  return m;
}

}  // namespace dosim::runner
