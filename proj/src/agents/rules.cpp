#include "dosim/agents/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace dosim::agents {

bool FilterRule::matches(const sim::Packet& packet, double flow_rate) const noexcept {
  if (!has_predicate()) return false;
  const auto key = packet.flow_key();
  if (dst && key.dst != *dst) return false;
  if (proto && key.proto != *proto) return false;
  if (!src_in.empty() && !std::binary_search(src_in.begin(), src_in.end(), key.src)) return false;
  if (min_rate && flow_rate < *min_rate) return false;
  if (min_size && packet.size < *min_size) return false;
  return true;
}

bool FilterRule::same_predicates(const FilterRule& other) const noexcept {
  return dst == other.dst && proto == other.proto && src_in == other.src_in &&
         min_rate == other.min_rate && min_size == other.min_size;
}

FilterRule generalize_rule(const trust::TrustCluster& cluster, std::span<const FlowRecord> members) {
  const std::set<FlowKey> member_keys(cluster.member_flows.begin(), cluster.member_flows.end());
  std::vector<FlowRecord> kept;
  for (const auto& record : members) {
    if (member_keys.contains(record.key)) kept.push_back(record);
  }
  if (kept.empty()) {
    throw GeneralizationError("cluster " + std::to_string(cluster.id) + " has no member flow records");
  }

  FilterRule rule;
  const auto& first = kept.front().key;
  const bool common_dst = std::all_of(kept.begin(), kept.end(), [&](auto& r) { return r.key.dst == first.dst; });
  const bool common_proto =
      std::all_of(kept.begin(), kept.end(), [&](auto& r) { return r.key.proto == first.proto; });
  if (common_dst) rule.dst = first.dst;
  if (common_proto) rule.proto = first.proto;

  double min_rate = kept.front().features.packet_rate();
  double size_ratio_sum = 0.0;
  for (const auto& r : kept) {
    min_rate = std::min(min_rate, r.features.packet_rate());
    size_ratio_sum += r.features.size_ratio();
  }
  // expm1(log1p(n)) may land an ulp above an integer count.
  rule.min_rate = std::nearbyint(min_rate * 1e6) / 1e6;
  if (size_ratio_sum / static_cast<double>(kept.size()) > 2.0) rule.min_size = kOversize;

  if (!rule.dst && !rule.proto && !rule.min_size) {
    for (const auto& r : kept) rule.src_in.push_back(r.key.src);
    std::sort(rule.src_in.begin(), rule.src_in.end());
    rule.src_in.erase(std::unique(rule.src_in.begin(), rule.src_in.end()), rule.src_in.end());
  }
  return rule;
}

NetworkElement::NetworkElement(NodeId node, sim::NodeKind kind) : node_(node), kind_(kind) {}

NetworkElement::Installed NetworkElement::install_rule(FilterRule rule, SimTime now) {
  if (kind_ != sim::NodeKind::Ne) {
    throw RuleRejected("node " + std::to_string(node_) + " is not a reconfigurable network element");
  }
  if (!rule.has_predicate()) throw RuleRejected("rule " + std::to_string(rule.id) + " has no predicate");
  if (!(rule.ttl > 0)) throw RuleRejected("rule " + std::to_string(rule.id) + " needs ttl > 0");
  for (auto& existing : rules_) {
    if (existing.same_predicates(rule)) {
      existing.installed_at = now;
      existing.ttl = rule.ttl;
      return {existing.id, true};
    }
  }
  rule.installed_at = now;
  const auto pos = std::lower_bound(rules_.begin(), rules_.end(), rule.id,
                                    [](const FilterRule& r, RuleId id) { return r.id < id; });
  const auto id = rule.id;
  rules_.insert(pos, std::move(rule));
  return {id, false};
}

std::size_t NetworkElement::expire_rules(SimTime now) {
  return std::erase_if(rules_, [&](const FilterRule& r) { return now >= r.installed_at + r.ttl; });
}

double NetworkElement::flow_rate(const FlowKey& key, SimTime now) {
  auto it = seen_.find(key);
  if (it == seen_.end()) return 0.0;
  auto& times = it->second;
  while (!times.empty() && times.front() < now - kRateWindow) times.pop_front();
  return static_cast<double>(times.size()) / kRateWindow;
}

std::optional<sim::FilterHit> NetworkElement::apply(const sim::Packet& packet, SimTime now) {
  const auto key = packet.flow_key();
  seen_[key].push_back(now);
  const double rate = flow_rate(key, now);
  for (const auto& rule : rules_) {
    if (rule.active(now) && rule.matches(packet, rate)) return sim::FilterHit{rule.id, rate};
  }
  return std::nullopt;
}

}  // namespace dosim::agents
