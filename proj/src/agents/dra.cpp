#include "dosim/agents/dra.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dosim::agents {

void Policy::validate() const {
  if (k_confirm < 1) throw std::invalid_argument("k_confirm must be >= 1");
  if (!(rule_ttl > 0)) throw std::invalid_argument("rule_ttl must be > 0");
  if (!(broadcast_on >= 0 && broadcast_on <= 1)) throw std::invalid_argument("broadcast_on must lie in [0, 1]");
}

DetectionReactionAgent::DetectionReactionAgent(DraConfig config)
    : config_(std::move(config)), model_(config_.trust) {
  config_.policy.validate();
  std::sort(config_.subscriptions.begin(), config_.subscriptions.end());
}

int DetectionReactionAgent::streak(trust::ClusterId id) const {
  auto it = streak_.find(id);
  return it == streak_.end() ? 0 : it->second;
}

AgentMessage DetectionReactionAgent::make(const AgentId& to, SimTime now, MessageBody body) const {
  return AgentMessage{config_.id, to, now, std::move(body)};
}

void DetectionReactionAgent::note_class(trust::ClusterId id, DraOutput& out) {
  const auto cls = model_.classify(id);
  auto [it, inserted] = last_class_.try_emplace(id, trust::TrustClass::Unknown);
  if (!inserted && it->second == cls) return;
  if (inserted && cls == trust::TrustClass::Unknown) return;
  it->second = cls;
  const auto& c = model_.cluster(id);
  out.changes.push_back(ClassificationChange{config_.id, id, cls, c.trust, c.weight, c.centroid, c.shadow,
                                             {c.member_flows.begin(), c.member_flows.end()}});
}

std::optional<NeTarget> DetectionReactionAgent::nearest_ne(const FilterRule& rule,
                                                           const std::vector<FlowRecord>& members) const {
  if (config_.nes.empty()) return std::nullopt;
  if (!config_.hops) return config_.nes.front();
  const NodeId victim = rule.dst.value_or(members.front().key.dst);
  std::optional<NeTarget> best;
  int best_hops = std::numeric_limits<int>::max();
  for (const auto& ne : config_.nes) {
    const int h = config_.hops(ne.node, victim);
    if (h >= 0 && h < best_hops) {
      best_hops = h;
      best = ne;
    }
  }
  return best ? best : config_.nes.front();
}

DraOutput DetectionReactionAgent::step(const std::vector<AgentMessage>& inbox, SimTime now) {
  DraOutput out;
  std::set<trust::ClusterId> touched;
  std::vector<trust::FlowStatus> flows;
  std::vector<const trust::ReputationMessage*> reputation;
  std::vector<const AgentMessage*> reputation_envelopes;

  // (1) Observe reported vectors; collect alarms and peer messages.
  for (const auto& msg : inbox) {
    if (const auto* report = std::get_if<FlowReport>(&msg.body)) {
      for (const auto& [key, v] : report->flows) {
        if (!v.finite()) {
          out.errors.push_back({config_.id, "non-finite feature vector from " + msg.from});
          continue;
        }
        const auto obs = model_.observe(v, key, now);
        owner_[key] = obs.id;
        latest_[key] = v;
        touched.insert(obs.id);
        flows.push_back({key, false});
        if (obs.created) {
          for (const auto& peer : config_.subscriptions) {
            out.messages.push_back(make(peer, now,
                                        trust::ReputationMessage{config_.id, v, model_.cluster(obs.id).trust, 0,
                                                                 trust::ReputationMode::Query, now}));
          }
        }
      }
      for (const auto& key : report->closed) {
        if (owner_.contains(key)) flows.push_back({key, true});
      }
    } else if (const auto* alarm = std::get_if<Alarm>(&msg.body)) {
      if (alarm->severity >= 0.0 && alarm->severity <= 1.0) {
        alarms_.push_back(*alarm);
      } else {
        out.errors.push_back({config_.id, "alarm severity outside [0, 1] from " + msg.from});
      }
    } else if (const auto* rep = std::get_if<trust::ReputationMessage>(&msg.body)) {
      reputation.push_back(rep);
      reputation_envelopes.push_back(&msg);
    } else {
      out.errors.push_back({config_.id, "unexpected message kind from " + msg.from});
    }
  }

  // (2) Host feedback over the horizon.
  std::erase_if(alarms_, [&](const Alarm& a) { return a.at < now - config_.feedback_horizon; });
  const auto feedback = trust::aggregate_feedback(alarms_, flows, now, config_.feedback_horizon);
  for (const auto& obs : feedback) {
    auto it = owner_.find(obs.flow_key);
    if (it == owner_.end()) continue;
    model_.update_trust(it->second, obs.o);
    touched.insert(it->second);
  }
  for (const auto& f : flows) {
    if (f.closed_cleanly) {
      owner_.erase(f.key);
      latest_.erase(f.key);
    }
  }

  for (const auto id : touched) {
    const auto& c = model_.cluster(id);
    const auto cls = model_.classify(id);
    // (3) Streak of consecutive malicious windows; only local evidence counts.
    if (cls == trust::TrustClass::Malicious && !c.shadow) {
      ++streak_[id];
    } else {
      streak_[id] = 0;
    }
    note_class(id, out);

    // (4) Inform subscribers once per downward crossing.
    if (!c.shadow) {
      if (c.trust < config_.policy.broadcast_on) {
        if (informed_.insert(id).second) {
          for (const auto& peer : config_.subscriptions) {
            out.messages.push_back(make(peer, now,
                                        trust::ReputationMessage{config_.id, c.centroid, c.trust, c.weight,
                                                                 trust::ReputationMode::Inform, now}));
          }
        }
      } else {
        informed_.erase(id);
      }
    }

    // (5) Confirmed: generalise and reconfigure the nearest NE. While the
    // streak holds the rule is re-sent every half ttl to keep it alive.
    const int s = streak_[id];
    if (s < config_.policy.k_confirm) continue;
    auto last = last_rule_at_.find(id);
    const bool due = s == config_.policy.k_confirm ||
                     (last != last_rule_at_.end() && now - last->second >= config_.policy.rule_ttl / 2.0);
    if (!due) continue;
    std::vector<FlowRecord> members;
    for (const auto& key : c.member_flows) {
      auto owner = owner_.find(key);
      auto features = latest_.find(key);
      if (owner != owner_.end() && owner->second == id && features != latest_.end()) {
        members.push_back({key, features->second});
      }
    }
    try {
      auto rule = generalize_rule(c, members);
      rule.id = config_.rule_id_base + next_rule_++;
      rule.ttl = config_.policy.rule_ttl;
      rule.origin_dra = config_.id;
      rule.installed_at = now;
      const auto target = nearest_ne(rule, members);
      if (!target) {
        out.errors.push_back({config_.id, "no network element to reconfigure"});
        continue;
      }
      last_rule_at_[id] = now;
      issued_.push_back(rule);
      out.messages.push_back(make(target->agent, now, std::move(rule)));
    } catch (const GeneralizationError& e) {
      out.errors.push_back({config_.id, e.what()});
    }
  }

  // (6) Peer reputation: merge informs and replies, answer queries.
  for (std::size_t i = 0; i < reputation.size(); ++i) {
    const auto& rep = *reputation[i];
    try {
      if (rep.mode == trust::ReputationMode::Query) {
        if (!rep.centroid.finite()) throw trust::InvalidMessage("query centroid is not finite");
        if (auto answer = model_.answer_query(rep.centroid)) {
          out.messages.push_back(make(reputation_envelopes[i]->from, now,
                                      trust::ReputationMessage{config_.id, rep.centroid, answer->trust,
                                                               answer->weight, trust::ReputationMode::Reply, now}));
        }
      } else {
        const auto id = model_.merge_reputation(rep);
        note_class(id, out);
      }
    } catch (const trust::InvalidMessage& e) {
      out.errors.push_back({config_.id, e.what()});
    }
  }
  return out;
}

}  // namespace dosim::agents
