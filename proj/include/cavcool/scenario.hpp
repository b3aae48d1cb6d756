#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavcool/accelerated_lattice.hpp"
#include "cavcool/core_model.hpp"
#include "cavcool/moment_dynamics.hpp"
#include "cavcool/physical_mapping.hpp"
#include "cavcool/spectral_steady.hpp"

namespace cavcool {

enum class ModeSelection { NonRWA, RWA, Both };

/// Parses "rwa", "nonrwa" or "both"; throws ConfigError otherwise.
ModeSelection parse_mode(const std::string& text);
const char* to_string(ModeSelection mode);
std::vector<Dynamics> expand(ModeSelection mode);

struct InitialCondition {
  bool coherent = false;
  cplx beta_c{};
  cplx beta_a{};

  MomentState moments() const;
};

struct TransportConfig {
  double displacement = 0.0;  // units of 1/k
  double duration = 1.0;
  RampShape shape = RampShape::RaisedCosine;
  double eta = 0.12;
  double cooling_on_time = 0.0;
  double cavity_shift = 0.0;
  bool freeze_cavity_frequency = false;

  /// Profile whose bare coupling is the model's g_eff.
  PhaseProfile profile(const ModelParams& params) const;
};

struct SweepGrid {
  std::vector<double> nu, nu_c, g_eff, kappa;
  std::vector<int> n_qubits;

  std::size_t size() const;
};

inline constexpr std::size_t kMaxSweepPoints = 1'000'000;

struct ScenarioConfig {
  std::string name = "scenario";
  ModelParams model;
  std::optional<MappedModel> physical;  // set when the model came from a physical block
  int n_qubits = 1;
  double refractive_shift = 0.0;  // single-particle shift used for n_qubits > 1
  InitialCondition initial;
  ModeSelection mode = ModeSelection::Both;
  double t_end = 100.0;
  double sample_dt = 0.05;
  IntegratorSettings integrator;
  std::optional<TransportConfig> transport;
  std::optional<SweepGrid> sweep;
  /// Optional explicit fit window; defaults to [2 tau, 6 tau] after the
  /// cooling start.
  std::optional<double> fit_begin, fit_end;

  /// ModelParams actually simulated (after the n-qubit mapping).
  ModelParams effective_params() const;
  /// Throws ConfigError on inconsistent fields.
  void validate() const;
};

/// Parses a JSON scenario document. Syntax errors report line and column,
/// field errors report the JSON path. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

/// Builtin catalog: "fig3", "fig4a", "fig4b", "fig5".
std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

struct RunSummary {
  Dynamics mode = Dynamics::NonRWA;
  double tau = 0.0;          // 1 / min |Re lambda| of this mode's linear part
  double asymptote = 0.0;    // steady E_atom of this mode (0 for RWA)
  DecayFit fit;
  bool fit_window_met = false;
  double final_energy = 0.0;
};

struct TransportSummary {
  double cooling_on_time = 0.0;
  double energy_at_switch = 0.0;
  double energy_after_5tau = 0.0;
  double final_energy = 0.0;
  DecayFit fit;
  bool fit_window_met = false;
};

struct ScenarioResult {
  std::string name;
  ModelParams params;
  double e0 = 0.0;
  double tau_rwa = 0.0;
  double tau_nonrwa = 0.0;
  LimitEstimates limits;
  std::vector<RunSummary> runs;
  std::vector<Trajectory> trajectories;  // parallel to runs
  std::optional<TransportSummary> transport;
  std::vector<TransportState> transport_trajectory;

  struct File {
    std::string name;
    std::string content;
  };
  /// CSV trajectories and the JSON summary, ready to be written.
  std::vector<File> files;
};

/// Throws ConfigError, UnstableSystem, InvalidRegime, StepSizeUnderflow.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct SweepRow {
  ModelParams base;  // grid values before the n-qubit mapping
  int n_qubits = 1;
  double e0 = 0.0;
  double tau = 0.0;
  std::string regime;  // limit label, or "unstable" / "degenerate"
};

/// Evaluates every grid point independently (in parallel); rows are returned
/// in grid order (nu slowest, n_qubits fastest). `threads` = 0 picks the hardware count.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config, unsigned threads = 0);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// JSON report of a physical mapping; `setup` is "ring" or "standing".
std::string mapping_report(const std::string& setup, const std::string& json_text);

/// JSON report of the qubit error budget.
std::string error_budget_report(const std::string& json_text);

}  // namespace cavcool
