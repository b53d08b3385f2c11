#include "dosim/runner/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace dosim::runner {

ScenarioError::ScenarioError(const std::string& what, std::optional<int> line, std::optional<int> column)
    : std::runtime_error(line ? what + " (line " + std::to_string(*line) +
                                    (column ? ", column " + std::to_string(*column) : std::string()) + ")"
                              : what),
      line_(line),
      column_(column) {}

std::optional<SimTime> Scenario::attack_start() const {
  std::optional<SimTime> t;
  for (const auto& a : attacks) {
    if (!t || a.start < *t) t = a.start;
  }
  return t;
}

std::string ne_agent_id(const sim::Topology& topo, NodeId node) { return "ne-" + topo.node(node).id; }

namespace {

[[noreturn]] void fail(const YAML::Node& at, const std::string& what) {
  const auto mark = at.Mark();
  if (mark.is_null()) throw ScenarioError(what);
  throw ScenarioError(what, mark.line + 1, mark.column + 1);
}

void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
}

void require_seq(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence()) fail(node, where + " must be a list");
}

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<std::string_view> allowed) {
  require_map(node, where);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, "unknown key \"" + key + "\" in " + where);
    }
  }
}

YAML::Node required(const YAML::Node& node, const std::string& key, const std::string& where) {
  const auto child = node[key];
  if (!child) fail(node, "missing required key \"" + key + "\" in " + where);
  return child;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(node, "\"" + key + "\" must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "\"" + key + "\" has an invalid value \"" + node.Scalar() + "\"");
  }
}

template <typename T>
T get(const YAML::Node& parent, const std::string& key, T fallback) {
  const auto child = parent[key];
  if (!child) return fallback;
  return scalar<T>(child, key);
}

double get_positive(const YAML::Node& parent, const std::string& key, double fallback) {
  const double v = get<double>(parent, key, fallback);
  if (!(v > 0)) fail(parent[key] ? parent[key] : parent, "\"" + key + "\" must be > 0");
  return v;
}

std::uint64_t get_unsigned(const YAML::Node& parent, const std::string& key, std::uint64_t fallback) {
  const auto child = parent[key];
  if (!child) return fallback;
  if (!child.IsScalar() || child.Scalar().empty() || child.Scalar().front() == '-') {
    fail(child, "\"" + key + "\" must be a non-negative integer");
  }
  return scalar<std::uint64_t>(child, key);
}

struct Resolver {
  const sim::Topology& topo;

  NodeId node(const YAML::Node& at, const std::string& key) const {
    const auto name = scalar<std::string>(at, key);
    const auto id = topo.find_node(name);
    if (!id) fail(at, "unknown node \"" + name + "\" referenced by \"" + key + "\"");
    return *id;
  }

  NodeId host(const YAML::Node& at, const std::string& key) const {
    const auto id = node(at, key);
    if (topo.node(id).kind != sim::NodeKind::Host) {
      fail(at, "\"" + key + "\" must name a host, \"" + topo.node(id).id + "\" is a " +
                   std::string(to_string(topo.node(id).kind)));
    }
    return id;
  }

  std::vector<NodeId> hosts(const YAML::Node& at, const std::string& key) const {
    require_seq(at, "\"" + key + "\"");
    std::vector<NodeId> out;
    for (const auto& item : at) out.push_back(host(item, key));
    return out;
  }
};

sim::NodeKind parse_kind(const YAML::Node& at) {
  const auto text = scalar<std::string>(at, "kind");
  if (text == "host") return sim::NodeKind::Host;
  if (text == "router") return sim::NodeKind::Router;
  if (text == "ne") return sim::NodeKind::Ne;
  fail(at, "node kind must be host, router or ne, got \"" + text + "\"");
}

AttackKind parse_attack(const YAML::Node& at, const std::string& key) {
  const auto text = scalar<std::string>(at, key);
  if (auto k = parse_attack_kind(text)) return *k;
  fail(at, "unknown attack kind \"" + text + "\"");
}

sim::Topology parse_topology(const YAML::Node& doc) {
  check_keys(doc, "topology", {"nodes", "links"});
  sim::Topology topo;
  const auto nodes = required(doc, "nodes", "topology");
  require_seq(nodes, "topology.nodes");
  for (const auto& n : nodes) {
    check_keys(n, "node", {"id", "kind", "cpu_capacity", "mem_slots", "vulnerable_to", "recovery_after"});
    sim::Node node;
    node.id = scalar<std::string>(required(n, "id", "node"), "id");
    if (topo.find_node(node.id)) fail(n["id"], "duplicate node id \"" + node.id + "\"");
    if (n["kind"]) node.kind = parse_kind(n["kind"]);
    node.cpu_capacity = get_positive(n, "cpu_capacity", node.cpu_capacity);
    node.mem_slots = static_cast<std::uint32_t>(get_unsigned(n, "mem_slots", node.mem_slots));
    if (node.mem_slots == 0) fail(n["mem_slots"], "\"mem_slots\" must be >= 1");
    if (const auto vuln = n["vulnerable_to"]) {
      require_seq(vuln, "\"vulnerable_to\"");
      for (const auto& v : vuln) node.vulnerable_to.insert(parse_attack(v, "vulnerable_to"));
    }
    if (n["recovery_after"]) node.recovery_after = get_positive(n, "recovery_after", 1.0);
    topo.add_node(std::move(node));
  }

  if (const auto links = doc["links"]) {
    require_seq(links, "topology.links");
    Resolver r{topo};
    for (const auto& l : links) {
      check_keys(l, "link", {"id", "from", "to", "capacity", "queue_limit", "latency"});
      sim::Link link;
      link.id = scalar<std::string>(required(l, "id", "link"), "id");
      if (topo.find_link(link.id)) fail(l["id"], "duplicate link id \"" + link.id + "\"");
      link.from = r.node(required(l, "from", "link"), "from");
      link.to = r.node(required(l, "to", "link"), "to");
      if (link.from == link.to) fail(l, "link \"" + link.id + "\" is a self loop");
      link.capacity = get_positive(l, "capacity", link.capacity);
      link.queue_limit = static_cast<std::uint32_t>(get_unsigned(l, "queue_limit", link.queue_limit));
      if (link.queue_limit == 0) fail(l["queue_limit"], "\"queue_limit\" must be >= 1");
      link.latency = get<double>(l, "latency", link.latency);
      if (link.latency < 0) fail(l["latency"], "\"latency\" must be >= 0");
      topo.add_link(std::move(link));
    }
  }

  try {
    topo.validate();
  } catch (const sim::TopologyError& e) {
    fail(doc, e.what());
  }
  const auto routes = sim::RoutingTable::compute(topo);
  for (NodeId a = 0; a < topo.nodes().size(); ++a) {
    for (NodeId b = 0; b < topo.nodes().size(); ++b) {
      if (routes.hops(a, b) < 0) {
        fail(doc, "no route from \"" + topo.node(a).id + "\" to \"" + topo.node(b).id +
                      "\" (hosts do not forward transit traffic)");
      }
    }
  }
  return topo;
}

attacks::LegitConfig parse_legit(const YAML::Node& n, const Resolver& r, double duration) {
  check_keys(n, "legit sender", {"src", "dst", "proto", "size", "start", "stop", "rate", "min_rate", "max_rate",
                                 "additive_step", "rto", "jitter"});
  attacks::LegitConfig c;
  c.aimd.src = r.host(required(n, "src", "legit sender"), "src");
  c.aimd.dst = r.host(required(n, "dst", "legit sender"), "dst");
  if (c.aimd.src == c.aimd.dst) fail(n, "legit sender needs src != dst");
  if (const auto p = n["proto"]) {
    const auto text = scalar<std::string>(p, "proto");
    const auto proto = parse_proto(text);
    if (!proto) fail(p, "unknown proto \"" + text + "\"");
    c.proto = *proto;
  }
  c.size = static_cast<std::uint32_t>(get_unsigned(n, "size", c.size));
  if (c.size == 0) fail(n["size"], "\"size\" must be >= 1");
  c.start = get<double>(n, "start", 0.0);
  c.stop = get<double>(n, "stop", duration);
  if (c.start < 0 || !(c.stop > c.start)) fail(n, "legit sender needs 0 <= start < stop");
  c.aimd.min_rate = get_positive(n, "min_rate", c.aimd.min_rate);
  c.aimd.max_rate = get_positive(n, "max_rate", c.aimd.max_rate);
  c.aimd.rate = get_positive(n, "rate", c.aimd.max_rate);
  c.aimd.additive_step = get<double>(n, "additive_step", c.aimd.additive_step);
  c.aimd.rto = get_positive(n, "rto", c.aimd.rto);
  c.jitter = get<double>(n, "jitter", c.jitter);
  if (c.aimd.min_rate > c.aimd.max_rate) fail(n, "legit sender needs min_rate <= max_rate");
  if (c.aimd.rate < c.aimd.min_rate || c.aimd.rate > c.aimd.max_rate) fail(n, "\"rate\" outside [min_rate, max_rate]");
  if (c.aimd.additive_step < 0) fail(n["additive_step"], "\"additive_step\" must be >= 0");
  if (!(c.jitter >= 0 && c.jitter < 1)) fail(n["jitter"], "\"jitter\" must lie in [0, 1)");
  return c;
}

attacks::GeneratorState parse_generator(const YAML::Node& n, const Resolver& r, double duration) {
  check_keys(n, "attack",
             {"kind", "sources", "victim", "reflectors", "rate", "burst", "start", "stop", "size", "repeat"});
  attacks::GeneratorState g;
  g.kind = parse_attack(required(n, "kind", "attack"), "kind");
  g.sources = r.hosts(required(n, "sources", "attack"), "sources");
  g.victim = r.node(required(n, "victim", "attack"), "victim");
  if (const auto refl = n["reflectors"]) g.reflectors = r.hosts(refl, "reflectors");
  g.rate = get<double>(n, "rate", g.rate);
  if (const auto b = n["burst"]) {
    check_keys(b, "burst", {"period", "length", "burst_rate"});
    attacks::BurstSpec burst;
    burst.period = get<double>(b, "period", burst.period);
    burst.length = get<double>(b, "length", burst.length);
    burst.burst_rate = get<double>(b, "burst_rate", burst.burst_rate);
    g.burst = burst;
  } else if (g.kind == AttackKind::Shrew || g.kind == AttackKind::RoQ) {
    g.burst = attacks::BurstSpec{};
  }
  g.start = get<double>(n, "start", 0.0);
  g.stop = get<double>(n, "stop", duration);
  g.size = static_cast<std::uint32_t>(get_unsigned(n, "size", g.size));
  g.repeat = get<double>(n, "repeat", g.repeat);
  if (g.start < 0) fail(n, "attack start must be >= 0");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    fail(n, e.what());
  }
  return g;
}

AgentPlacement parse_agents(const YAML::Node& n, const sim::Topology& topo) {
  check_keys(n, "agents",
             {"window", "sample_interval", "feedback_horizon", "trust", "policy", "host_sensor", "dras",
              "network_sensors", "host_sensors"});
  AgentPlacement a;
  a.window = get_positive(n, "window", a.window);
  a.sample_interval = get_positive(n, "sample_interval", a.sample_interval);
  a.feedback_horizon = get_positive(n, "feedback_horizon", a.feedback_horizon);

  if (const auto t = n["trust"]) {
    check_keys(t, "trust", {"tau", "eta", "alpha", "theta_mal", "theta_ben", "prior"});
    a.trust.tau = get<double>(t, "tau", a.trust.tau);
    a.trust.eta = get<double>(t, "eta", a.trust.eta);
    a.trust.alpha = get<double>(t, "alpha", a.trust.alpha);
    a.trust.theta_mal = get<double>(t, "theta_mal", a.trust.theta_mal);
    a.trust.theta_ben = get<double>(t, "theta_ben", a.trust.theta_ben);
    a.trust.prior = get<double>(t, "prior", a.trust.prior);
    try {
      a.trust.validate();
    } catch (const std::invalid_argument& e) {
      fail(t, e.what());
    }
  }
  if (const auto p = n["policy"]) {
    check_keys(p, "policy", {"k_confirm", "rule_ttl", "broadcast_on"});
    a.policy.k_confirm = get<int>(p, "k_confirm", a.policy.k_confirm);
    a.policy.rule_ttl = get<double>(p, "rule_ttl", a.policy.rule_ttl);
    a.policy.broadcast_on = get<double>(p, "broadcast_on", a.policy.broadcast_on);
    try {
      a.policy.validate();
    } catch (const std::invalid_argument& e) {
      fail(p, e.what());
    }
  }
  if (const auto h = n["host_sensor"]) {
    check_keys(h, "host_sensor", {"util_threshold", "sustain", "min_gap"});
    a.host_sensor.util_threshold = get<double>(h, "util_threshold", a.host_sensor.util_threshold);
    a.host_sensor.sustain = get<double>(h, "sustain", a.host_sensor.sustain);
    a.host_sensor.min_gap = get<double>(h, "min_gap", a.host_sensor.min_gap);
    if (!(a.host_sensor.util_threshold > 0 && a.host_sensor.util_threshold < 1)) {
      fail(h, "\"util_threshold\" must lie in (0, 1)");
    }
    if (a.host_sensor.sustain < 0 || a.host_sensor.min_gap < 0) fail(h, "host sensor timings must be >= 0");
  }

  Resolver r{topo};
  std::set<AgentId> ids;
  auto claim = [&](const YAML::Node& at) {
    const auto id = scalar<std::string>(at, "id");
    if (id.rfind("ne-", 0) == 0) fail(at, "agent ids starting with \"ne-\" are reserved");
    if (!ids.insert(id).second) fail(at, "duplicate agent id \"" + id + "\"");
    return id;
  };

  if (const auto dras = n["dras"]) {
    require_seq(dras, "agents.dras");
    for (const auto& d : dras) {
      check_keys(d, "dra", {"id", "peers", "nes"});
      DraSpec spec;
      spec.id = claim(required(d, "id", "dra"));
      if (const auto peers = d["peers"]) {
        require_seq(peers, "\"peers\"");
        for (const auto& p : peers) spec.peers.push_back(scalar<std::string>(p, "peers"));
      }
      if (const auto nes = d["nes"]) {
        require_seq(nes, "\"nes\"");
        for (const auto& e : nes) {
          const auto id = r.node(e, "nes");
          if (topo.node(id).kind != sim::NodeKind::Ne) fail(e, "\"" + topo.node(id).id + "\" is not an ne node");
          spec.nes.push_back(id);
        }
      }
      a.dras.push_back(std::move(spec));
    }
  }
  auto dra_ref = [&](const YAML::Node& parent, const std::string& where) {
    const auto at = required(parent, "dra", where);
    const auto id = scalar<std::string>(at, "dra");
    if (std::none_of(a.dras.begin(), a.dras.end(), [&](const DraSpec& d) { return d.id == id; })) {
      fail(at, "unknown dra \"" + id + "\"");
    }
    return id;
  };
  for (const auto& d : a.dras) {
    for (const auto& peer : d.peers) {
      if (peer == d.id) fail(n["dras"], "dra \"" + d.id + "\" lists itself as a peer");
      if (std::none_of(a.dras.begin(), a.dras.end(), [&](const DraSpec& x) { return x.id == peer; })) {
        fail(n["dras"], "unknown peer \"" + peer + "\" of dra \"" + d.id + "\"");
      }
    }
  }

  if (const auto ns = n["network_sensors"]) {
    require_seq(ns, "agents.network_sensors");
    for (const auto& s : ns) {
      check_keys(s, "network sensor", {"id", "link", "dra"});
      NetworkSensorSpec spec;
      spec.id = claim(required(s, "id", "network sensor"));
      const auto link_at = required(s, "link", "network sensor");
      const auto link = scalar<std::string>(link_at, "link");
      const auto id = topo.find_link(link);
      if (!id) fail(link_at, "unknown link \"" + link + "\"");
      spec.link = *id;
      spec.dra = dra_ref(s, "network sensor");
      a.network_sensors.push_back(std::move(spec));
    }
  }
  if (const auto hs = n["host_sensors"]) {
    require_seq(hs, "agents.host_sensors");
    for (const auto& s : hs) {
      check_keys(s, "host sensor", {"id", "host", "dra"});
      HostSensorSpec spec;
      spec.id = claim(required(s, "id", "host sensor"));
      spec.host = r.host(required(s, "host", "host sensor"), "host");
      spec.dra = dra_ref(s, "host sensor");
      a.host_sensors.push_back(std::move(spec));
    }
  }
  return a;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("syntax error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!doc || doc.IsNull()) throw ScenarioError("empty scenario document");
  check_keys(doc, "scenario",
             {"name", "duration", "seed", "bus_latency", "idle_timeout", "topology", "legit_senders", "attacks",
              "agents"});

  Scenario s;
  s.name = get<std::string>(doc, "name", s.name);
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos) {
    fail(doc["name"], "\"name\" must be non-empty and free of path separators");
  }
  s.duration = scalar<double>(required(doc, "duration", "scenario"), "duration");
  if (!(s.duration > 0)) fail(doc["duration"], "\"duration\" must be > 0");
  s.seed = get_unsigned(doc, "seed", s.seed);
  s.bus_latency = get_positive(doc, "bus_latency", s.bus_latency);
  s.idle_timeout = get_positive(doc, "idle_timeout", s.idle_timeout);
  s.topology = parse_topology(required(doc, "topology", "scenario"));

  const Resolver r{s.topology};
  if (const auto legit = doc["legit_senders"]) {
    require_seq(legit, "legit_senders");
    for (const auto& l : legit) s.legit_senders.push_back(parse_legit(l, r, s.duration));
  }
  if (const auto attacks = doc["attacks"]) {
    require_seq(attacks, "attacks");
    for (const auto& a : attacks) s.attacks.push_back(parse_generator(a, r, s.duration));
  }
  if (const auto agents = doc["agents"]) s.agents = parse_agents(agents, s.topology);
  if (!s.agents.network_sensors.empty() && s.agents.dras.empty()) {
    throw ScenarioError("network sensors need at least one dra");
  }
  if (2 * s.bus_latency >= s.agents.window) {
    fail(doc["bus_latency"] ? doc["bus_latency"] : doc, "\"bus_latency\" must be below half the window");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace dosim::runner
