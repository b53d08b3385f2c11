// Command-line front end: run, validate, list-attacks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dosim/attacks/taxonomy.hpp"
#include "dosim/runner/report.hpp"
#include "dosim/runner/scenario.hpp"
#include "dosim/runner/simulation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInternal = 2;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dosim;

  CLI::App app{"dosim: discrete-event DoS/DDoS simulator with agent-based detection"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "csv";

  auto* run = app.add_subcommand("run", "Run a scenario and write its report and event log");
  run->add_option("--scenario", scenario_path, "Scenario YAML file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Parse and check a scenario without running it");
  validate->add_option("--scenario", scenario_path, "Scenario YAML file")->required();

  app.add_subcommand("list-attacks", "Print every attack kind with its taxonomy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (app.got_subcommand("list-attacks")) {
      for (auto kind : kAllAttackKinds) std::cout << attacks::describe(kind) << '\n';
      return kOk;
    }

    runner::Scenario scenario;
    try {
      scenario = runner::load_scenario(scenario_path);
    } catch (const runner::ScenarioError& e) {
      std::cerr << scenario_path << ": " << e.what() << '\n';
      return kInvalid;
    }

    if (app.got_subcommand("validate")) {
      std::cout << scenario_path << ": ok (" << scenario.name << ", " << scenario.topology.nodes().size()
                << " nodes, " << scenario.attacks.size() << " attacks)\n";
      return kOk;
    }

    runner::RunOptions options;
    options.seed = seed;
    const auto result = runner::run_scenario(scenario, options);
    const auto fmt = *runner::parse_format(format);

    std::filesystem::create_directories(out_dir);
    const std::string stem = scenario.name + "-" + std::to_string(result.seed);
    const auto report_path = std::filesystem::path(out_dir) / (stem + "." + std::string(runner::extension(fmt)));
    const auto log_path = std::filesystem::path(out_dir) / (stem + ".log");
    write_file(report_path, runner::emit_report(result.report, fmt));
    write_file(log_path, runner::render_log(result.log, scenario.topology));

    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.log_hash));
    std::cout << "report " << report_path.string() << "\nlog " << log_path.string() << "\nlog_hash " << hash
              << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
