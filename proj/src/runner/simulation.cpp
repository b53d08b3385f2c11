#include "dosim/runner/simulation.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "dosim/agents/sensors.hpp"
#include "dosim/attacks/aimd.hpp"
#include "dosim/attacks/generators.hpp"

namespace dosim::runner {

namespace {

std::int64_t second_of(SimTime t) { return static_cast<std::int64_t>(std::floor(t)); }

class Simulation {
 public:
  Simulation(const Scenario& scenario, const RunOptions& options);

  RunResult run();

 private:
  void build_agents();
  void install_hooks();
  void schedule_traffic();
  void schedule_agents();

  void send(agents::AgentMessage msg);
  void deliver(agents::AgentMessage msg);
  void raise_alarm(const AgentId& sensor, const AgentId& dra, const agents::Alarm& alarm);
  void close_windows();
  void step_dras();
  void sample_hosts();

  void demand(std::size_t i);
  void send_legit(std::size_t i);
  void judge_span(std::size_t i, SimTime span_start);
  void fire(std::size_t g);

  void note_flow(const sim::Packet& p, bool final_fate);

  const Scenario& sc_;
  const bool strip_;
  RunResult result_;
  sim::Engine engine_;
  sim::Network net_;
  EventLog& log_;

  std::map<AgentId, std::unique_ptr<agents::DetectionReactionAgent>> dras_;
  std::map<AgentId, std::vector<agents::AgentMessage>> inbox_;
  std::vector<agents::NetworkSensor> ns_;
  std::vector<std::vector<std::size_t>> ns_by_link_;
  std::vector<agents::HostSensor> hs_;
  std::map<NodeId, agents::NetworkElement> nes_;
  std::map<AgentId, NodeId> ne_by_agent_;

  std::vector<attacks::LegitSender> legit_;
  std::vector<attacks::AttackGenerator> gens_;
  std::unordered_map<PacketId, std::size_t> legit_packets_;
  std::set<NodeId> victims_;
  std::map<std::int64_t, TrafficRecord> traffic_;
  std::map<FlowKey, FlowTruthRecord> truth_;
};

Simulation::Simulation(const Scenario& scenario, const RunOptions& options)
    : sc_(scenario),
      strip_(options.strip_tags),
      net_(engine_, scenario.topology, scenario.idle_timeout),
      log_(result_.log) {
  result_.seed = options.seed.value_or(scenario.seed);
  build_agents();
  install_hooks();
  schedule_traffic();
  schedule_agents();
}

void Simulation::build_agents() {
  const auto& topo = net_.topology();
  for (NodeId n = 0; n < topo.nodes().size(); ++n) {
    if (topo.node(n).kind != sim::NodeKind::Ne) continue;
    nes_.emplace(n, agents::NetworkElement(n, sim::NodeKind::Ne));
    ne_by_agent_.emplace(ne_agent_id(topo, n), n);
  }

  const auto& placement = sc_.agents;
  for (std::size_t i = 0; i < placement.dras.size(); ++i) {
    const auto& spec = placement.dras[i];
    agents::DraConfig config;
    config.id = spec.id;
    config.trust = placement.trust;
    config.policy = placement.policy;
    config.subscriptions = spec.peers;
    config.feedback_horizon = placement.feedback_horizon;
    config.rule_id_base = (i + 1) * 1'000'000;
    config.hops = [this](NodeId a, NodeId b) { return net_.routes().hops(a, b); };
    if (spec.nes.empty()) {
      for (const auto& [node, ne] : nes_) config.nes.push_back({ne_agent_id(topo, node), node});
    } else {
      for (NodeId node : spec.nes) config.nes.push_back({ne_agent_id(topo, node), node});
    }
    dras_.emplace(spec.id, std::make_unique<agents::DetectionReactionAgent>(std::move(config)));
  }

  ns_by_link_.resize(topo.links().size());
  const flows::FlowTableConfig table{placement.window, sc_.idle_timeout};
  for (const auto& spec : placement.network_sensors) {
    ns_by_link_[spec.link].push_back(ns_.size());
    ns_.emplace_back(spec.id, spec.dra, table, 0.0);
  }
  for (const auto& spec : placement.host_sensors) {
    hs_.emplace_back(spec.id, spec.dra, spec.host, placement.host_sensor);
  }
}

void Simulation::note_flow(const sim::Packet& p, bool final_fate) {
  auto [it, inserted] = truth_.try_emplace(p.flow_key());
  if (inserted) it->second.flow = p.flow_key();
  if (p.attack_tag) it->second.attack = true;
  if (final_fate) ++it->second.packets;
}

void Simulation::install_hooks() {
  auto& hooks = net_.hooks();
  hooks.filter = [this](NodeId node, const sim::Packet& p, SimTime now) -> std::optional<sim::FilterHit> {
    return nes_.at(node).apply(p, now);
  };
  hooks.on_transmit = [this](LinkId link, const sim::Packet& p, SimTime now) {
    note_flow(p, false);
    for (std::size_t i : ns_by_link_[link]) {
      if (auto alarm = ns_[i].observe(p, now)) raise_alarm(ns_[i].id(), ns_[i].dra(), *alarm);
    }
  };
  hooks.on_drop = [this](const sim::Packet& p, sim::DropReason reason, NodeId at, std::optional<LinkId> link,
                         std::optional<sim::FilterHit> hit, SimTime now) {
    note_flow(p, true);
    DropRecord d;
    d.packet = p.id;
    d.flow = p.flow_key();
    d.size = p.size;
    d.reason = reason;
    d.node = at;
    d.link = link;
    if (hit) {
      d.rule = hit->rule;
      d.measured_rate = hit->measured_rate;
    }
    d.truth = p.attack_tag;
    log_.append(now, d);
    if (auto it = legit_packets_.find(p.id); it != legit_packets_.end()) {
      legit_[it->second].on_fate(p.id, true);
      legit_packets_.erase(it);
    }
  };
  hooks.on_arrive = [this](NodeId node, const sim::Packet& p, sim::HostOutcome outcome, SimTime now) {
    note_flow(p, true);
    if (auto it = legit_packets_.find(p.id); it != legit_packets_.end()) {
      const bool ok = outcome == sim::HostOutcome::Accepted;
      legit_[it->second].on_fate(p.id, !ok);
      if (ok) ++traffic_[second_of(p.created_at)].legit_delivered;
      legit_packets_.erase(it);
    }
    if (p.attack_tag && victims_.contains(node)) ++traffic_[second_of(now)].attack_at_victim;
  };
  hooks.on_crash = [this](NodeId node, SimTime now) {
    log_.append(now, HostEventRecord{node, true});
    for (auto& hs : hs_) {
      if (hs.host() == node) raise_alarm(hs.id(), hs.dra(), hs.on_crash(now));
    }
  };
  hooks.on_recover = [this](NodeId node, SimTime now) { log_.append(now, HostEventRecord{node, false}); };
}

void Simulation::schedule_traffic() {
  for (std::size_t i = 0; i < sc_.legit_senders.size(); ++i) {
    const auto& cfg = sc_.legit_senders[i];
    legit_.emplace_back(cfg, Rng::substream(result_.seed, "legit/" + std::to_string(i)));
    if (cfg.start <= sc_.duration) engine_.schedule(cfg.start, [this, i] { demand(i); });
    for (std::int64_t k = 0;; ++k) {
      const SimTime span_start = cfg.start + static_cast<double>(k) * attacks::LegitSender::kSpan;
      const SimTime judge_at = span_start + 2 * attacks::LegitSender::kSpan;
      if (span_start >= cfg.stop || judge_at > sc_.duration) break;
      engine_.schedule(judge_at, [this, i, span_start] { judge_span(i, span_start); });
    }
  }
  for (std::size_t g = 0; g < sc_.attacks.size(); ++g) {
    gens_.emplace_back(sc_.attacks[g]);
    victims_.insert(sc_.attacks[g].victim);
    if (auto first = gens_[g].first(); first && *first <= sc_.duration) {
      engine_.schedule(*first, [this, g] { fire(g); });
    }
  }
}

void Simulation::schedule_agents() {
  const double w = sc_.agents.window;
  for (std::int64_t k = 1;; ++k) {
    const SimTime t = static_cast<double>(k) * w;
    if (t > sc_.duration) break;
    engine_.schedule(t, [this] { close_windows(); });
    if (t + 2 * sc_.bus_latency <= sc_.duration) {
      engine_.schedule(t + 2 * sc_.bus_latency, [this] { step_dras(); });
    }
  }
  if (hs_.empty()) return;
  const double dt = sc_.agents.sample_interval;
  for (std::int64_t j = 1;; ++j) {
    const SimTime t = static_cast<double>(j) * dt;
    if (t > sc_.duration) break;
    engine_.schedule(t, [this] { sample_hosts(); });
  }
}

void Simulation::send(agents::AgentMessage msg) {
  if (const auto* rep = std::get_if<trust::ReputationMessage>(&msg.body)) {
    log_.append(engine_.now(), ReputationRecord{msg.from, msg.to, *rep});
  }
  engine_.schedule(engine_.now() + sc_.bus_latency, [this, m = std::move(msg)]() mutable { deliver(std::move(m)); });
}

void Simulation::deliver(agents::AgentMessage msg) {
  const SimTime now = engine_.now();
  if (dras_.contains(msg.to)) {
    inbox_[msg.to].push_back(std::move(msg));
    return;
  }
  if (auto ne = ne_by_agent_.find(msg.to); ne != ne_by_agent_.end()) {
    const auto* rule = std::get_if<agents::FilterRule>(&msg.body);
    if (!rule) {
      log_.append(now, AgentErrorRecord{{msg.to, "network element ignores non-rule message from " + msg.from}});
      return;
    }
    try {
      const auto installed = nes_.at(ne->second).install_rule(*rule, now);
      auto logged = *rule;
      logged.id = installed.id;
      logged.installed_at = now;
      log_.append(now, RuleInstallRecord{msg.to, logged, installed.refreshed});
    } catch (const agents::RuleRejected& e) {
      log_.append(now, AgentErrorRecord{{msg.to, e.what()}});
    }
    return;
  }
  log_.append(now, AgentErrorRecord{{msg.from, "no agent named " + msg.to}});
}

void Simulation::raise_alarm(const AgentId& sensor, const AgentId& dra, const agents::Alarm& alarm) {
  log_.append(engine_.now(), AlarmRecord{sensor, dra, alarm});
  send(agents::AgentMessage{sensor, dra, engine_.now(), alarm});
}

void Simulation::close_windows() {
  const SimTime now = engine_.now();
  for (auto& ns : ns_) {
    auto report = ns.step(now);
    send(agents::AgentMessage{ns.id(), ns.dra(), now, std::move(report)});
  }
  for (auto& [node, ne] : nes_) ne.expire_rules(now);
}

void Simulation::step_dras() {
  const SimTime now = engine_.now();
  for (auto& [id, dra] : dras_) {
    auto inbox = std::move(inbox_[id]);
    inbox_[id].clear();
    auto out = dra->step(inbox, now);
    for (auto& change : out.changes) log_.append(now, ClassificationRecord{std::move(change)});
    for (auto& error : out.errors) log_.append(now, AgentErrorRecord{std::move(error)});
    for (auto& msg : out.messages) send(std::move(msg));
  }
}

void Simulation::sample_hosts() {
  const SimTime now = engine_.now();
  std::set<NodeId> watched;
  for (const auto& hs : hs_) watched.insert(hs.host());
  for (NodeId n : watched) sim::advance_host_resources(net_.host(n), sc_.agents.sample_interval, now);
  for (auto& hs : hs_) {
    if (auto alarm = hs.sample(net_.host(hs.host()), now)) raise_alarm(hs.id(), hs.dra(), *alarm);
  }
}

void Simulation::demand(std::size_t i) {
  const SimTime now = engine_.now();
  ++traffic_[second_of(now)].legit_offered;
  const auto tick = legit_[i].on_demand(now);
  if (tick.send) send_legit(i);
  if (tick.next && *tick.next <= sc_.duration) engine_.schedule(*tick.next, [this, i] { demand(i); });
}

void Simulation::send_legit(std::size_t i) {
  const auto& cfg = legit_[i].config();
  sim::Packet p;
  p.src = cfg.aimd.src;
  p.dst = cfg.aimd.dst;
  p.proto = cfg.proto;
  p.size = cfg.size;
  const PacketId id = net_.next_id();
  legit_packets_[id] = i;
  legit_[i].on_sent(id, engine_.now());
  if (!net_.inject(p)) {
    legit_packets_.erase(id);
    legit_[i].on_fate(id, true);
  }
}

void Simulation::judge_span(std::size_t i, SimTime span_start) {
  const SimTime now = engine_.now();
  const auto event = legit_[i].evaluate_span(span_start, now);
  if (event != attacks::AimdEvent::WindowLoss) return;
  const SimTime resume = std::max(now, legit_[i].aimd().paused_until);
  if (resume > sc_.duration) return;
  engine_.schedule(resume, [this, i] {
    if (legit_[i].on_resume(engine_.now())) send_legit(i);
  });
}

void Simulation::fire(std::size_t g) {
  const SimTime now = engine_.now();
  auto emission = gens_[g].emit(now);
  for (auto& p : emission.packets) {
    if (strip_) p.attack_tag.reset();
    if (net_.inject(std::move(p))) ++traffic_[second_of(now)].attack_emitted;
  }
  if (emission.next && *emission.next <= sc_.duration) engine_.schedule(*emission.next, [this, g] { fire(g); });
}

RunResult Simulation::run() {
  net_.run_until(sc_.duration);
  const SimTime end = sc_.duration;
  const auto last = static_cast<std::int64_t>(std::ceil(end));
  for (std::int64_t s = 0; s < last; ++s) {
    auto t = traffic_[s];
    t.second = s;
    log_.append(end, t);
  }
  for (const auto& [key, f] : truth_) log_.append(end, f);
  log_.append(end, StatsRecord{net_.stats()});
  result_.report = compute_metrics(log_, sc_);
  result_.log_hash = log_hash(log_, sc_.topology);
  return std::move(result_);
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  Simulation sim(scenario, options);
  return sim.run();
}

}  // namespace dosim::runner
