// Scenario runner and data emitter.
//
//   cavcool scenario fig4b --out results/
//   cavcool run my.json --mode rwa
//   cavcool sweep grid.json
//   cavcool map ring ring.json
//   cavcool errors budget.json
//
// Exit codes: 0 success, 2 config error, 3 physics error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cavcool/errors.hpp"
#include "cavcool/scenario.hpp"

namespace fs = std::filesystem;
using namespace cavcool;

namespace {

constexpr int kConfigError = 2;
constexpr int kPhysicsError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes into `out_dir` if given, stdout otherwise.
void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
  if (out_dir.empty()) {
    std::cout << "# " << name << '\n' << content;
    return;
  }
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  std::cerr << "wrote " << path.string() << '\n';
}

void emit_result(const std::string& out_dir, const ScenarioResult& r) {
  for (const auto& f : r.files) emit(out_dir, f.name, f.content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity cooling of trapped qubits: moment dynamics, steady states and scenarios"};
  app.require_subcommand(1);

  std::string out_dir, mode_text;
  bool seedless = false;
  app.add_option("--out", out_dir, "Directory for output files (default: stdout)");
  app.add_option("--mode", mode_text, "Override dynamics: rwa, nonrwa or both")
      ->check(CLI::IsMember({"rwa", "nonrwa", "both"}));
  app.add_flag("--seedless", seedless, "Accepted for compatibility; every computation is deterministic");

  std::string config_path, scenario_name, setup;
  auto* run = app.add_subcommand("run", "Integrate a scenario config");
  run->add_option("config", config_path, "Scenario JSON")->required();
  auto* sweep = app.add_subcommand("sweep", "Steady energy and cooling time over a parameter grid");
  sweep->add_option("config", config_path, "Scenario JSON with a sweep block")->required();
  auto* scenario = app.add_subcommand("scenario", "Run a builtin scenario");
  scenario->add_option("name", scenario_name, "fig3, fig4a, fig4b or fig5")
      ->required()
      ->check(CLI::IsMember(builtin_scenario_names()));
  auto* map = app.add_subcommand("map", "Map a physical setup onto model parameters");
  map->add_option("setup", setup, "ring or standing")->required()->check(CLI::IsMember({"ring", "standing"}));
  map->add_option("config", config_path, "Physical config JSON")->required();
  auto* errors = app.add_subcommand("errors", "Qubit error budget");
  errors->add_option("config", config_path, "Error-budget JSON")->required();

  for (auto* sub : {run, sweep, scenario, map, errors}) {
    sub->add_option("--out", out_dir, "Directory for output files (default: stdout)");
    sub->add_option("--mode", mode_text, "Override dynamics: rwa, nonrwa or both")
        ->check(CLI::IsMember({"rwa", "nonrwa", "both"}));
    sub->add_flag("--seedless", seedless, "Accepted for compatibility; every computation is deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run || *scenario || *sweep) {
      ScenarioConfig cfg = *scenario ? builtin_scenario(scenario_name) : load_scenario(config_path);
      if (!mode_text.empty()) cfg.mode = parse_mode(mode_text);
      if (*sweep) {
        emit(out_dir, cfg.name + "_sweep.csv", sweep_csv(run_sweep(cfg)));
      } else {
        emit_result(out_dir, run_scenario(cfg));
      }
    } else if (*map) {
      emit(out_dir, "mapping_" + setup + ".json", mapping_report(setup, slurp(config_path)));
    } else if (*errors) {
      emit(out_dir, "error_budget.json", error_budget_report(slurp(config_path)));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "physics error: " << e.what() << '\n';
    return kPhysicsError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
