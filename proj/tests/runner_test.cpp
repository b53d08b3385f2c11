#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dosim/runner/metrics.hpp"
#include "dosim/runner/report.hpp"
#include "dosim/runner/scenario.hpp"
#include "dosim/runner/simulation.hpp"

using namespace dosim;
using namespace dosim::runner;
namespace fs = std::filesystem;

namespace {

constexpr const char* kMinimal = R"(duration: 10
topology:
  nodes:
    - {id: A}
    - {id: B}
  links:
    - {id: ab, from: A, to: B}
)";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::path(testing::TempDir()) / ("dosim_runner_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(DOSIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioError parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ScenarioError";
  return ScenarioError("none");
}

}  // namespace

TEST(Scenario, MinimalDocumentGetsDefaults) {
  const auto s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "scenario");
  EXPECT_EQ(s.duration, 10.0);
  EXPECT_EQ(s.seed, 1u);
  EXPECT_EQ(s.bus_latency, 0.01);
  EXPECT_EQ(s.agents.window, 1.0);
  EXPECT_EQ(s.agents.policy.k_confirm, 3);
  EXPECT_EQ(s.topology.nodes().size(), 2u);
  EXPECT_TRUE(s.attacks.empty());
  EXPECT_FALSE(s.attack_start());
}

TEST(Scenario, UnknownReferenceIsNamed) {
  const auto e = parse_error(std::string(kMinimal) + "legit_senders:\n  - {src: A, dst: ghost}\n");
  EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
}

TEST(Scenario, UnknownKeyReportsLine) {
  const auto e = parse_error(std::string(kMinimal) + "speling_mistake: 3\n");
  EXPECT_NE(std::string(e.what()).find("speling_mistake"), std::string::npos);
  ASSERT_TRUE(e.line());
  EXPECT_EQ(*e.line(), 8);
}

TEST(Scenario, MissingDurationRejected) {
  const auto e = parse_error("topology:\n  nodes: [{id: A}]\n  links: []\n");
  EXPECT_NE(std::string(e.what()).find("duration"), std::string::npos);
}

TEST(Scenario, SyntaxErrorHasPosition) {
  const auto e = parse_error("duration: 10\ntopology: {nodes: [\n");
  ASSERT_TRUE(e.line());
  EXPECT_GE(*e.line(), 2);
  EXPECT_TRUE(e.column());
}

TEST(Scenario, SemanticChecks) {
  // attack sources must be hosts
  parse_error(std::string(kMinimal) + "attacks:\n  - {kind: UdpFlood, sources: [A], victim: B, rate: 0}\n");
  // bus latency must leave room inside a window
  parse_error(std::string(kMinimal) + "bus_latency: 0.5\n");
  // reserved agent ids
  parse_error(std::string(kMinimal) + "agents:\n  dras: [{id: ne-x}]\n");
}

TEST(Scenario, ShippedScenariosValidate) {
  for (const auto& entry : fs::directory_iterator(DOSIM_SCENARIO_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(load_scenario(entry.path().string())) << entry.path();
  }
}

TEST(Metrics, LatenciesAndFalsePositives) {
  Scenario s = parse_scenario(kMinimal);
  attacks::GeneratorState g;
  g.kind = AttackKind::UdpFlood;
  g.sources = {0};
  g.victim = 1;
  g.start = 10.0;
  g.stop = 20.0;
  s.attacks.push_back(g);

  const FlowKey bad{0, 1, Proto::Udp};
  EventLog log;
  agents::ClassificationChange early;
  early.cls = trust::TrustClass::Malicious;
  early.members = {bad};
  log.append(9.0, ClassificationRecord{early});  // before the attack: ignored
  agents::ClassificationChange shadow = early;
  shadow.shadow = true;
  log.append(12.0, ClassificationRecord{shadow});
  log.append(13.5, ClassificationRecord{early});
  agents::FilterRule rule;
  rule.id = 5;
  log.append(14.0, RuleInstallRecord{"ne-x", rule, false});
  DropRecord d;
  d.reason = sim::DropReason::Filter;
  d.flow = FlowKey{10, 1, Proto::TcpLike};
  log.append(15.0, d);
  log.append(29.0, RuleInstallRecord{"ne-x", rule, true});
  for (std::int64_t sec = 0; sec < 20; ++sec) {
    log.append(30.0, TrafficRecord{sec, 10, sec >= 10 && sec < 14 ? 5u : 10u, 0, 0});
  }
  log.append(30.0, FlowTruthRecord{bad, true, 100});
  for (NodeId src = 10; src < 15; ++src) log.append(30.0, FlowTruthRecord{FlowKey{src, 1, Proto::TcpLike}, false, 5});

  const auto m = compute_metrics(log, s);
  ASSERT_TRUE(m.detection_latency);
  EXPECT_DOUBLE_EQ(*m.detection_latency, 3.5);
  ASSERT_TRUE(m.mitigation_latency);
  EXPECT_DOUBLE_EQ(*m.mitigation_latency, 4.0);
  EXPECT_DOUBLE_EQ(m.false_positive_rate, 0.2);
  EXPECT_EQ(m.rules, 1u);
  EXPECT_DOUBLE_EQ(m.goodput_ratio.before, 1.0);
  EXPECT_DOUBLE_EQ(m.goodput_ratio.during, 0.5);
  EXPECT_DOUBLE_EQ(m.goodput_ratio.after, 1.0);
}

TEST(Metrics, NoAttackMeansNoLatencies) {
  const auto m = compute_metrics(EventLog{}, parse_scenario(kMinimal));
  EXPECT_FALSE(m.detection_latency);
  EXPECT_FALSE(m.mitigation_latency);
  EXPECT_EQ(m.false_positive_rate, 0.0);
  EXPECT_EQ(m.goodput_ratio.during, 1.0);
}

TEST(EventLogTest, RejectsTimeTravel) {
  EventLog log;
  log.append(2.0, HostEventRecord{1, true});
  EXPECT_THROW(log.append(1.0, HostEventRecord{1, false}), std::logic_error);
}

TEST(Report, CsvFormatting) {
  MetricsReport m;
  m.goodput_ratio.during = 0.9;
  const auto csv = emit_report(m, ReportFormat::Csv);
  const auto nl = csv.find('\n');
  ASSERT_NE(nl, std::string::npos);
  EXPECT_EQ(csv.substr(0, nl),
            "detection_latency,mitigation_latency,false_positive_rate,goodput_before,goodput_during,goodput_after,"
            "injected,delivered,queue_dropped,filter_dropped,in_flight,alarms,rules");
  EXPECT_EQ(csv.substr(nl + 1), "NA,NA,0.000000,1.000000,0.900000,1.000000,0,0,0,0,0,0,0\n");
}

TEST(Report, JsonFormatting) {
  MetricsReport m;
  m.detection_latency = 2.5;
  const auto json = emit_report(m, ReportFormat::Json);
  EXPECT_NE(json.find("\"detection_latency\": 2.5"), std::string::npos) << json;
  EXPECT_NE(json.find("\"mitigation_latency\": null"), std::string::npos) << json;
  EXPECT_NE(json.find("\"goodput_ratio\""), std::string::npos);
  EXPECT_EQ(parse_format("json"), ReportFormat::Json);
  EXPECT_FALSE(parse_format("xml"));
}

TEST(Simulation, SameSeedSameBytes) {
  const auto s = load_scenario(std::string(DOSIM_SCENARIO_DIR) + "/udp_flood.yaml");
  const auto a = run_scenario(s);
  const auto b = run_scenario(s);
  EXPECT_EQ(a.log_hash, b.log_hash);
  EXPECT_EQ(render_log(a.log, s.topology), render_log(b.log, s.topology));
  EXPECT_EQ(emit_report(a.report, ReportFormat::Csv), emit_report(b.report, ReportFormat::Csv));
  EXPECT_TRUE(a.report.conservation.conserved());
}

TEST(Simulation, SeedOverrideChangesTheRun) {
  const auto s = load_scenario(std::string(DOSIM_SCENARIO_DIR) + "/baseline.yaml");
  RunOptions o;
  o.seed = s.seed + 1;
  const auto a = run_scenario(s);
  const auto b = run_scenario(s, o);
  EXPECT_EQ(b.seed, s.seed + 1);
  EXPECT_NE(a.log_hash, b.log_hash);
}

TEST(Cli, ExitCodesAndNaming) {
  const auto dir = scratch("cli");
  const std::string scen = std::string(DOSIM_SCENARIO_DIR) + "/baseline.yaml";
  EXPECT_EQ(cli("list-attacks"), 0);
  EXPECT_EQ(cli("validate --scenario " + scen), 0);
  EXPECT_EQ(cli("run --scenario " + scen + " --seed 3 --format json --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "baseline-3.json"));
  EXPECT_TRUE(fs::exists(dir / "baseline-3.log"));

  const auto bad = dir / "bad.yaml";
  std::ofstream(bad) << kMinimal << "speling_mistake: 1\n";
  EXPECT_EQ(cli("validate --scenario " + bad.string()), 1);
  EXPECT_EQ(cli("run --scenario " + bad.string()), 1);
  EXPECT_EQ(cli("run --scenario " + (dir / "missing.yaml").string()), 1);
  EXPECT_EQ(cli("run --scenario " + scen + " --format xml"), 1);

  // an output "directory" that is a regular file cannot be created
  const auto blocker = dir / "blocker";
  std::ofstream(blocker) << "x";
  EXPECT_EQ(cli("run --scenario " + scen + " --out " + (blocker / "sub").string()), 2);
}

TEST(Cli, RunOutputMatchesLibrary) {
  const auto dir = scratch("bytes");
  const std::string scen = std::string(DOSIM_SCENARIO_DIR) + "/baseline.yaml";
  ASSERT_EQ(cli("run --scenario " + scen + " --out " + dir.string()), 0);
  const auto s = load_scenario(scen);
  const auto r = run_scenario(s);
  EXPECT_EQ(read_file(dir / "baseline-7.csv"), emit_report(r.report, ReportFormat::Csv));
  EXPECT_EQ(read_file(dir / "baseline-7.log"), render_log(r.log, s.topology));
}
