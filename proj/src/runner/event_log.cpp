#include "dosim/runner/event_log.hpp"

#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "dosim/rng.hpp"

namespace dosim::runner {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  const int n = std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  if (n < static_cast<int>(sizeof buf)) return std::string(buf, n > 0 ? static_cast<std::size_t>(n) : 0);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  va_start(args, format);
  std::vsnprintf(out.data(), out.size(), format, args);
  va_end(args);
  out.pop_back();
  return out;
}

std::string name(const sim::Topology& topo, NodeId id) {
  return id < topo.nodes().size() ? topo.node(id).id : "#" + std::to_string(id);
}

std::string flow(const sim::Topology& topo, const FlowKey& key) {
  return name(topo, key.src) + ">" + name(topo, key.dst) + "/" + std::string(to_string(key.proto));
}

std::string vec(const flows::FeatureVector& v) {
  return fmt("[%.6f,%.6f,%.6f,%.6f]", v[0], v[1], v[2], v[3]);
}

std::string rule_text(const agents::FilterRule& r, const sim::Topology& topo) {
  std::string out = fmt("rule=%" PRIu64, r.id);
  if (r.dst) out += " dst=" + name(topo, *r.dst);
  if (r.proto) out += " proto=" + std::string(to_string(*r.proto));
  if (!r.src_in.empty()) {
    out += " src_in=";
    for (std::size_t i = 0; i < r.src_in.size(); ++i) out += (i ? "," : "") + name(topo, r.src_in[i]);
  }
  if (r.min_rate) out += fmt(" rate>=%.6f", *r.min_rate);
  if (r.min_size) out += fmt(" size>=%u", *r.min_size);
  out += fmt(" ttl=%.6f origin=%s", r.ttl, r.origin_dra.c_str());
  return out;
}

}  // namespace

bool is_decision(const RecordBody& body) noexcept {
  return std::holds_alternative<AlarmRecord>(body) || std::holds_alternative<ReputationRecord>(body) ||
         std::holds_alternative<ClassificationRecord>(body) || std::holds_alternative<RuleInstallRecord>(body) ||
         std::holds_alternative<AgentErrorRecord>(body);
}

void EventLog::append(SimTime at, RecordBody body) {
  if (!records_.empty() && at < records_.back().at) {
    throw std::logic_error(fmt("log record at %.9f precedes %.9f", at, records_.back().at));
  }
  records_.push_back(LogRecord{at, std::move(body)});
}

std::string render_record(const LogRecord& record, const sim::Topology& topo) {
  const std::string head = fmt("%.6f ", record.at);
  return head + std::visit(
                    Overloaded{
                        [&](const DropRecord& d) {
                          std::string s = fmt("DROP packet=%" PRIu64 " flow=%s size=%u reason=%s at=%s", d.packet,
                                              flow(topo, d.flow).c_str(), d.size,
                                              d.reason == sim::DropReason::Queue ? "queue" : "filter",
                                              name(topo, d.node).c_str());
                          if (d.link) s += " link=" + topo.link(*d.link).id;
                          if (d.rule) s += fmt(" rule=%" PRIu64 " rate=%.6f", *d.rule, d.measured_rate);
                          s += " truth=" + (d.truth ? std::string(to_string(*d.truth)) : std::string("legit"));
                          return s;
                        },
                        [&](const AlarmRecord& a) {
                          return fmt("ALARM sensor=%s dra=%s host=%s kind=%s severity=%.6f%s", a.sensor.c_str(),
                                     a.dra.c_str(), name(topo, a.alarm.host).c_str(),
                                     a.alarm.kind == agents::AlarmKind::Signature ? "signature" : "resource",
                                     a.alarm.severity,
                                     a.alarm.signature
                                         ? (" signature=" + std::string(to_string(*a.alarm.signature))).c_str()
                                         : "");
                        },
                        [&](const ReputationRecord& r) {
                          return fmt("REPUTATION from=%s to=%s mode=%s centroid=%s trust=%.6f weight=%" PRId64,
                                     r.from.c_str(), r.to.c_str(), std::string(to_string(r.msg.mode)).c_str(),
                                     vec(r.msg.centroid).c_str(), r.msg.trust, r.msg.weight);
                        },
                        [&](const ClassificationRecord& c) {
                          const auto& ch = c.change;
                          std::string s = fmt("CLASS dra=%s cluster=%" PRIu64 " class=%s trust=%.6f weight=%" PRId64
                                              " shadow=%d centroid=%s members=",
                                              ch.dra.c_str(), ch.cluster, std::string(to_string(ch.cls)).c_str(),
                                              ch.trust, ch.weight, ch.shadow ? 1 : 0, vec(ch.centroid).c_str());
                          for (std::size_t i = 0; i < ch.members.size(); ++i) {
                            s += (i ? "," : "") + flow(topo, ch.members[i]);
                          }
                          return s;
                        },
                        [&](const RuleInstallRecord& r) {
                          return fmt("RULE ne=%s %s refreshed=%d", r.ne.c_str(), rule_text(r.rule, topo).c_str(),
                                     r.refreshed ? 1 : 0);
                        },
                        [&](const HostEventRecord& h) {
                          return fmt("%s host=%s", h.crashed ? "CRASH" : "RECOVER", name(topo, h.host).c_str());
                        },
                        [&](const AgentErrorRecord& e) {
                          return fmt("AGENT_ERROR agent=%s what=%s", e.error.agent.c_str(), e.error.what.c_str());
                        },
                        [&](const TrafficRecord& t) {
                          return fmt("TRAFFIC second=%" PRId64 " legit_offered=%" PRIu64 " legit_delivered=%" PRIu64
                                     " attack_at_victim=%" PRIu64 " attack_emitted=%" PRIu64,
                                     t.second, t.legit_offered, t.legit_delivered, t.attack_at_victim,
                                     t.attack_emitted);
                        },
                        [&](const FlowTruthRecord& f) {
                          return fmt("FLOW flow=%s truth=%s packets=%" PRIu64, flow(topo, f.flow).c_str(),
                                     f.attack ? "attack" : "legit", f.packets);
                        },
                        [&](const StatsRecord& s) {
                          const auto& st = s.stats;
                          return fmt("STATS injected=%" PRIu64 " delivered=%" PRIu64 " queue_dropped=%" PRIu64
                                     " filter_dropped=%" PRIu64 " in_flight=%" PRIu64,
                                     st.injected, st.delivered, st.queue_dropped, st.filter_dropped, st.in_flight);
                        },
                    },
                    record.body);
}

std::string render_log(const EventLog& log, const sim::Topology& topo) {
  std::string out;
  for (const auto& r : log.records()) {
    out += render_record(r, topo);
    out += '\n';
  }
  return out;
}

std::uint64_t log_hash(const EventLog& log, const sim::Topology& topo) {
  std::uint64_t h = kFnvOffset;
  for (const auto& r : log.records()) {
    h = fnv1a64(render_record(r, topo), h);
    h = fnv1a64("\n", h);
  }
  return h;
}

}  // namespace dosim::runner
