#include "cavcool/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cavcool/csv.hpp"
#include "cavcool/errors.hpp"
#include "cavcool/imperfections.hpp"

namespace cavcool {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }))
      fail(join(path, it.key()), "unknown field");
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double number(const json& obj, const std::string& path, const char* key, std::optional<double> fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (!fallback) fail(join(path, key), "missing required field");
    return *fallback;
  }
  return as_number(*it, join(path, key));
}

int integer(const json& obj, const std::string& path, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(join(path, key), "expected an integer");
  return it->get<int>();
}

std::string text(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail(join(path, key), "expected a string");
  return it->get<std::string>();
}

bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(join(path, key), "expected true or false");
  return it->get<bool>();
}

// A number, or [re, im].
cplx complex_value(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  const std::string p = join(path, key);
  if (it->is_number()) return {as_number(*it, p), 0.0};
  if (!it->is_array() || it->size() != 2) fail(p, "expected a number or [re, im]");
  return {as_number((*it)[0], p + "[0]"), as_number((*it)[1], p + "[1]")};
}

template <class T>
std::vector<T> list(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  const std::string p = join(path, key);
  std::vector<T> out;
  auto read = [&](const json& v, const std::string& vp) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(vp, "expected an integer");
      out.push_back(v.get<T>());
    } else {
      out.push_back(as_number(v, vp));
    }
  };
  if (it->is_array()) {
    if (it->empty()) fail(p, "must not be empty");
    for (std::size_t i = 0; i < it->size(); ++i) read((*it)[i], p + "[" + std::to_string(i) + "]");
  } else {
    read(*it, p);
  }
  return out;
}

json parse_document(const std::string& json_text) {
  try {
    return json::parse(json_text);
  } catch (const json::parse_error& e) {
    // what() carries "at line L, column C".
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

ModelParams parse_model(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"nu", "nu_c", "g_eff", "kappa"});
  ModelParams p;
  p.nu = number(j, path, "nu", 1.0);
  p.nu_c = number(j, path, "nu_c");
  p.g_eff = number(j, path, "g_eff");
  p.kappa = number(j, path, "kappa");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return p;
}

RingCavityConfig parse_ring(const json& j, const std::string& path) {
  check_keys(j, path, {"setup", "g", "delta", "delta_c", "kappa", "k", "m", "beta_in", "coupling_scale"});
  RingCavityConfig c;
  c.g = number(j, path, "g");
  c.delta = number(j, path, "delta");
  c.delta_c = number(j, path, "delta_c", 0.0);
  c.kappa = number(j, path, "kappa");
  c.k = number(j, path, "k");
  c.m = number(j, path, "m");
  c.beta_in = complex_value(j, path, "beta_in");
  c.coupling_scale = number(j, path, "coupling_scale", 0.5);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return c;
}

StandingWaveConfig parse_standing(const json& j, const std::string& path) {
  check_keys(j, path, {"setup", "g", "omega", "delta", "delta_c", "kappa", "k", "k_c", "m"});
  StandingWaveConfig c;
  c.g = number(j, path, "g");
  c.omega = number(j, path, "omega");
  c.delta = number(j, path, "delta");
  c.delta_c = number(j, path, "delta_c", 0.0);
  c.kappa = number(j, path, "kappa");
  c.k = number(j, path, "k");
  c.k_c = number(j, path, "k_c", c.k);
  c.m = number(j, path, "m");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return c;
}

MappedModel map_physical(const json& j, const std::string& path, std::string setup) {
  expect_object(j, path);
  const std::string declared = text(j, path, "setup", setup);
  if (setup.empty()) setup = declared;
  if (declared != setup) fail(join(path, "setup"), "is '" + declared + "' but '" + setup + "' was requested");
  if (setup == "ring") return ring_model_params(parse_ring(j, path));
  if (setup == "standing") return standing_model_params(parse_standing(j, path));
  fail(join(path, "setup"), "must be \"ring\" or \"standing\"");
}

InitialCondition parse_initial(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"type", "beta_c", "beta_a"});
  const std::string type = text(j, path, "type", "coherent");
  InitialCondition ic;
  if (type == "vacuum") {
    if (j.contains("beta_c") || j.contains("beta_a")) fail(path, "vacuum takes no amplitudes");
    return ic;
  }
  if (type != "coherent") fail(join(path, "type"), "must be \"vacuum\" or \"coherent\"");
  ic.coherent = true;
  ic.beta_c = complex_value(j, path, "beta_c");
  ic.beta_a = complex_value(j, path, "beta_a");
  return ic;
}

RampShape parse_shape(const std::string& s, const std::string& path) {
  if (s == "raised_cosine") return RampShape::RaisedCosine;
  if (s == "minimum_jerk") return RampShape::MinimumJerk;
  fail(path, "must be \"raised_cosine\" or \"minimum_jerk\"");
}

TransportConfig parse_transport(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"displacement", "duration", "shape", "eta", "cooling_on_time", "cavity_shift",
                       "freeze_cavity_frequency"});
  TransportConfig t;
  t.displacement = number(j, path, "displacement");
  t.duration = number(j, path, "duration");
  t.shape = parse_shape(text(j, path, "shape", "raised_cosine"), join(path, "shape"));
  t.eta = number(j, path, "eta");
  t.cooling_on_time = number(j, path, "cooling_on_time", 0.0);
  t.cavity_shift = number(j, path, "cavity_shift", 0.0);
  t.freeze_cavity_frequency = boolean(j, path, "freeze_cavity_frequency", false);
  if (!(t.duration > 0.0)) fail(join(path, "duration"), "must be > 0");
  if (!(t.eta > 0.0)) fail(join(path, "eta"), "must be > 0");
  return t;
}

SweepGrid parse_sweep(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"nu", "nu_c", "g_eff", "kappa", "n_qubits"});
  SweepGrid g;
  g.nu = list<double>(j, path, "nu");
  g.nu_c = list<double>(j, path, "nu_c");
  g.g_eff = list<double>(j, path, "g_eff");
  g.kappa = list<double>(j, path, "kappa");
  g.n_qubits = list<int>(j, path, "n_qubits");
  return g;
}

IntegratorSettings parse_integrator(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"rel_tol", "abs_tol", "max_step"});
  IntegratorSettings s;
  s.rel_tol = number(j, path, "rel_tol", s.rel_tol);
  s.abs_tol = number(j, path, "abs_tol", s.abs_tol);
  s.max_step = number(j, path, "max_step", s.max_step);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return s;
}

ojson params_json(const ModelParams& p) {
  return ojson{{"nu", p.nu}, {"nu_c", p.nu_c}, {"g_eff", p.g_eff}, {"kappa", p.kappa}};
}

ojson fit_json(const DecayFit& f) {
  return ojson{{"ok", f.ok},         {"rate", f.ok ? f.rate : kNaN}, {"t_begin", f.t_begin},
               {"t_end", f.t_end},   {"points", f.points}};
}

std::string trajectory_csv(const Trajectory& traj, const ModelParams& p) {
  CsvTable table({"t", "e_atom", "e_cavity", "n_c", "n_a", "re_ca", "im_ca", "re_ca_dag", "im_ca_dag", "re_cc",
                  "im_cc", "re_aa", "im_aa", "re_mean_c", "im_mean_c", "re_mean_a", "im_mean_a"});
  for (const auto& pt : traj) {
    const auto& s = pt.state;
    table.add_row(std::vector<double>{pt.t, atom_energy(s, p), cavity_energy(s, p), s.n_c, s.n_a, s.ca.real(),
                                      s.ca.imag(), s.ca_dag.real(), s.ca_dag.imag(), s.cc.real(), s.cc.imag(),
                                      s.aa.real(), s.aa.imag(), s.mean_c.real(), s.mean_c.imag(),
                                      s.mean_a.real(), s.mean_a.imag()});
  }
  return table.str();
}

// Fit over [start + 2 tau, start + 6 tau] unless the config pins a window.
DecayFit fit_window(const ScenarioConfig& cfg, const std::vector<double>& t, const std::vector<double>& e,
                    double e0, double start, double tau, double spacing, bool& window_met) {
  const double begin = cfg.fit_begin.value_or(start + 2.0 * tau);
  const double end = cfg.fit_end.value_or(start + 6.0 * tau);
  DecayFit fit = fit_decay_rate(t, e, e0, begin, end, spacing);
  window_met = fit.ok && end <= t.back() + 1e-9;
  return fit;
}

double value_at(const std::vector<double>& t, const std::vector<double>& v, double when) {
  auto it = std::lower_bound(t.begin(), t.end(), when - 1e-9);
  if (it == t.end()) return kNaN;
  return v[static_cast<std::size_t>(it - t.begin())];
}

}  // namespace

ModeSelection parse_mode(const std::string& s) {
  if (s == "rwa") return ModeSelection::RWA;
  if (s == "nonrwa") return ModeSelection::NonRWA;
  if (s == "both") return ModeSelection::Both;
  throw ConfigError("mode: must be \"rwa\", \"nonrwa\" or \"both\"");
}

const char* to_string(ModeSelection mode) {
  switch (mode) {
    case ModeSelection::RWA: return "rwa";
    case ModeSelection::NonRWA: return "nonrwa";
    case ModeSelection::Both: return "both";
  }
  return "?";
}

std::vector<Dynamics> expand(ModeSelection mode) {
  switch (mode) {
    case ModeSelection::RWA: return {Dynamics::RWA};
    case ModeSelection::NonRWA: return {Dynamics::NonRWA};
    case ModeSelection::Both: return {Dynamics::RWA, Dynamics::NonRWA};
  }
  return {};
}

MomentState InitialCondition::moments() const {
  return coherent ? coherent_initial_state(beta_c, beta_a) : vacuum_state();
}

PhaseProfile TransportConfig::profile(const ModelParams& params) const {
  PhaseProfile p = make_transport_profile(displacement, duration, shape, eta, cooling_on_time, params.g_eff);
  p.cavity_shift = cavity_shift;
  p.freeze_cavity_frequency = freeze_cavity_frequency;
  return p;
}

std::size_t SweepGrid::size() const {
  auto n = [](std::size_t s) { return std::max<std::size_t>(s, 1); };
  // Saturating product so absurd grids are rejected rather than wrapping.
  long double total = 1.0L;
  for (std::size_t s : {nu.size(), nu_c.size(), g_eff.size(), kappa.size(), n_qubits.size()})
    total *= static_cast<long double>(n(s));
  return total > 1e18L ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(total);
}

ModelParams ScenarioConfig::effective_params() const { return n_qubit_params(model, refractive_shift, n_qubits); }

void ScenarioConfig::validate() const {
  try {
    model.validate();
    integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(t_end > 0.0)) throw ConfigError("t_end: must be > 0");
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt: must be > 0");
  if (t_end / sample_dt > 1e7) throw ConfigError("sample_dt: more than 1e7 samples requested");
  if (n_qubits < 1) throw ConfigError("n_qubits: must be >= 1");
  if (transport && mode == ModeSelection::RWA)
    throw ConfigError("mode: transport dynamics use the full coupling, \"rwa\" is not available");
  if (sweep) {
    if (sweep->size() > kMaxSweepPoints) throw ConfigError("sweep: grid exceeds 1e6 points");
    for (int n : sweep->n_qubits)
      if (n < 1) throw ConfigError("sweep.n_qubits: entries must be >= 1");
  }
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  const json doc = parse_document(json_text);
  expect_object(doc, "");
  check_keys(doc, "", {"name", "model", "physical", "n_qubits", "refractive_shift", "initial", "mode", "t_end",
                       "sample_dt", "integrator", "transport", "sweep", "fit"});
  ScenarioConfig cfg;
  cfg.name = text(doc, "", "name", cfg.name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\,") != std::string::npos)
    fail("name", "must be non-empty and contain no '/', '\\' or ','");

  const bool has_model = doc.contains("model"), has_physical = doc.contains("physical");
  if (has_model && has_physical) fail("<root>", "give exactly one of \"model\" and \"physical\"");
  if (!has_model && !has_physical && !doc.contains("sweep"))
    fail("<root>", "one of \"model\" or \"physical\" is required");
  if (has_model) cfg.model = parse_model(doc["model"], "model");
  if (has_physical) {
    cfg.physical = map_physical(doc["physical"], "physical", "");
    cfg.model = cfg.physical->params;
    cfg.refractive_shift = cfg.physical->lattice.refractive_shift;
  }
  cfg.refractive_shift = number(doc, "", "refractive_shift", cfg.refractive_shift);
  cfg.n_qubits = integer(doc, "", "n_qubits", 1);
  if (doc.contains("initial")) cfg.initial = parse_initial(doc["initial"], "initial");
  cfg.mode = parse_mode(text(doc, "", "mode", "both"));
  cfg.t_end = number(doc, "", "t_end", cfg.t_end);
  cfg.sample_dt = number(doc, "", "sample_dt", cfg.sample_dt);
  if (doc.contains("integrator")) cfg.integrator = parse_integrator(doc["integrator"], "integrator");
  if (doc.contains("transport")) cfg.transport = parse_transport(doc["transport"], "transport");
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc["sweep"], "sweep");
  if (doc.contains("fit")) {
    const json& f = doc["fit"];
    expect_object(f, "fit");
    check_keys(f, "fit", {"t_begin", "t_end"});
    if (f.contains("t_begin")) cfg.fit_begin = number(f, "fit", "t_begin");
    if (f.contains("t_end")) cfg.fit_end = number(f, "fit", "t_end");
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<std::string> builtin_scenario_names() { return {"fig3", "fig4a", "fig4b", "fig5"}; }

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  c.mode = ModeSelection::Both;
  if (name == "fig3") {
    c.model = {2.0, 2.0, 0.125, 1.0};
    // Amplitude not given for this figure; 2 puts E_atom/nu at 4 initially.
    c.initial = {true, {2.0, 0.0}, {}};
    c.t_end = 150.0;
    c.sample_dt = 0.02;
  } else if (name == "fig4a" || name == "fig4b") {
    c.model = {1.0, 1.0, 0.1, name == "fig4a" ? 0.1 : 1.0};
    c.initial = {true, {1.0, 0.0}, {}};
    c.t_end = name == "fig4a" ? 400.0 : 500.0;
    c.sample_dt = 0.05;
  } else if (name == "fig5") {
    c.model = {1.0, 1.0, 0.1, 1.0};
    c.mode = ModeSelection::NonRWA;
    TransportConfig t;
    t.displacement = 2.0 * std::numbers::pi;  // one lattice period of the phase
    t.duration = 16.0;
    t.shape = RampShape::RaisedCosine;
    t.eta = 0.12;
    t.cooling_on_time = 51.0;
    c.transport = t;
    c.t_end = 220.0;
    c.sample_dt = 0.05;
  } else {
    throw ConfigError("unknown builtin scenario '" + name + "'");
  }
  c.validate();
  return c;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioResult r;
  r.name = cfg.name;
  r.params = cfg.effective_params();
  const ModelParams& p = r.params;
  r.e0 = steady_state_energy(p);
  r.tau_nonrwa = cooling_time(p, Dynamics::NonRWA);
  r.tau_rwa = cooling_time(p, Dynamics::RWA);
  r.limits = limit_estimates(p);

  const MomentState y0 = cfg.initial.moments();
  const std::vector<double> times = sample_times(0.0, cfg.t_end, cfg.sample_dt);

  ojson summary;
  summary["name"] = cfg.name;
  summary["params"] = params_json(p);
  summary["n_qubits"] = cfg.n_qubits;
  summary["mode"] = to_string(cfg.mode);
  summary["e0"] = r.e0;
  summary["tau"] = {{"rwa", r.tau_rwa}, {"nonrwa", r.tau_nonrwa}};
  summary["regime"] = r.limits.regime;
  summary["limits"] = {{"doppler_tau", r.limits.doppler_tau},
                       {"doppler_temp", r.limits.doppler_temp},
                       {"sideband_tau", r.limits.sideband_tau},
                       {"sideband_temp", r.limits.sideband_temp}};
  if (cfg.physical) {
    const auto& l = cfg.physical->lattice;
    summary["lattice"] = {{"v0", l.v0}, {"eta", l.eta}, {"alpha", l.alpha}, {"refractive_shift", l.refractive_shift}};
  }

  if (cfg.transport) {
    const PhaseProfile profile = cfg.transport->profile(p);
    r.transport_trajectory = integrate_transport(p, profile, y0, times, cfg.integrator);

    CsvTable table({"t", "e_A", "x_mean", "phi", "n_c", "n_a"});
    std::vector<double> ts, ea;
    for (const auto& s : r.transport_trajectory) {
      const double e = transport_energy(s.moments, p, profile, s.t);
      ts.push_back(s.t);
      ea.push_back(e);
      table.add_row(std::vector<double>{s.t, e, s.x_mean, profile.phi(s.t), s.moments.n_c, s.moments.n_a});
    }
    r.files.push_back({cfg.name + "_transport.csv", table.str()});

    TransportSummary ts_sum;
    const double on = profile.cooling_on_time;
    ts_sum.cooling_on_time = on;
    ts_sum.energy_at_switch = value_at(ts, ea, on);
    ts_sum.energy_after_5tau = value_at(ts, ea, on + 5.0 * r.tau_nonrwa);
    ts_sum.final_energy = ea.back();
    ts_sum.fit = fit_window(cfg, ts, ea, r.e0, on, r.tau_nonrwa, slow_oscillation_period(p, Dynamics::NonRWA),
                            ts_sum.fit_window_met);
    r.transport = ts_sum;

    summary["transport"] = {{"cooling_on_time", on},
                            {"energy_at_switch", ts_sum.energy_at_switch},
                            {"energy_after_5tau", ts_sum.energy_after_5tau},
                            {"final_energy", ts_sum.final_energy},
                            {"fit", fit_json(ts_sum.fit)},
                            {"fit_window_met", ts_sum.fit_window_met},
                            {"fitted_rate_times_tau", ts_sum.fit.ok ? ts_sum.fit.rate * r.tau_nonrwa : kNaN}};
  } else {
    ojson runs = ojson::array();
    for (Dynamics mode : expand(cfg.mode)) {
      Trajectory traj = integrate(p, y0, times, cfg.integrator, mode);
      RunSummary rs;
      rs.mode = mode;
      rs.tau = mode == Dynamics::RWA ? r.tau_rwa : r.tau_nonrwa;
      // The RWA equations are homogeneous: their fixed point is the vacuum.
      rs.asymptote = mode == Dynamics::RWA ? 0.0 : r.e0;
      std::vector<double> ts, e;
      for (const auto& pt : traj) {
        ts.push_back(pt.t);
        e.push_back(atom_energy(pt.state, p));
      }
      rs.final_energy = e.back();
      rs.fit = fit_window(cfg, ts, e, rs.asymptote, 0.0, rs.tau, slow_oscillation_period(p, mode),
                          rs.fit_window_met);
      r.files.push_back({cfg.name + "_" + to_string(mode) + ".csv", trajectory_csv(traj, p)});
      runs.push_back({{"mode", to_string(mode)},
                      {"tau", rs.tau},
                      {"asymptote", rs.asymptote},
                      {"final_energy", rs.final_energy},
                      {"fit", fit_json(rs.fit)},
                      {"fit_window_met", rs.fit_window_met},
                      {"fitted_rate_times_tau", rs.fit.ok ? rs.fit.rate * rs.tau : kNaN}});
      r.runs.push_back(rs);
      r.trajectories.push_back(std::move(traj));
    }
    summary["runs"] = runs;
  }

  r.files.push_back({cfg.name + "_summary.json", summary.dump(2) + "\n"});
  return r;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, unsigned threads) {
  cfg.validate();
  if (!cfg.sweep) throw ConfigError("sweep: missing grid");
  const SweepGrid& g = *cfg.sweep;
  auto axis = [](const std::vector<double>& v, double base) { return v.empty() ? std::vector<double>{base} : v; };
  const auto nus = axis(g.nu, cfg.model.nu), nucs = axis(g.nu_c, cfg.model.nu_c);
  const auto gs = axis(g.g_eff, cfg.model.g_eff), ks = axis(g.kappa, cfg.model.kappa);
  const auto ns = g.n_qubits.empty() ? std::vector<int>{cfg.n_qubits} : g.n_qubits;

  std::vector<SweepRow> rows;
  rows.reserve(g.size());
  for (double nu : nus)
    for (double nuc : nucs)
      for (double ge : gs)
        for (double k : ks)
          for (int n : ns) {
            SweepRow row;
            row.base = {nu, nuc, ge, k};
            row.n_qubits = n;
            try {
              row.base.validate();
            } catch (const std::invalid_argument& e) {
              throw ConfigError(std::string("sweep: ") + e.what());
            }
            rows.push_back(row);
          }

  const Dynamics mode = cfg.mode == ModeSelection::RWA ? Dynamics::RWA : Dynamics::NonRWA;
  const double shift = cfg.refractive_shift;
  auto evaluate = [&](SweepRow& row) {
    const ModelParams p = n_qubit_params(row.base, shift, row.n_qubits);
    try {
      row.e0 = steady_state_energy(p);
      row.tau = cooling_time(p, mode);
      row.regime = limit_estimates(p).regime;
    } catch (const UnstableSystem&) {
      row.e0 = row.tau = kNaN;
      row.regime = "unstable";
    } catch (const DegenerateDenominator&) {
      row.e0 = row.tau = kNaN;
      row.regime = "degenerate";
    }
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) evaluate(rows[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  CsvTable table({"nu", "nu_c", "g_eff", "kappa", "N", "e0", "tau", "regime"});
  for (const auto& r : rows)
    table.add_row({format_number(r.base.nu), format_number(r.base.nu_c), format_number(r.base.g_eff),
                   format_number(r.base.kappa), std::to_string(r.n_qubits), format_number(r.e0),
                   format_number(r.tau), r.regime});
  return table.str();
}

std::string mapping_report(const std::string& setup, const std::string& json_text) {
  const json doc = parse_document(json_text);
  expect_object(doc, "");
  const bool wrapped = doc.contains("physical");
  const MappedModel m = map_physical(wrapped ? doc["physical"] : doc, wrapped ? "physical" : "", setup);
  ojson out;
  out["setup"] = setup;
  out["params"] = params_json(m.params);
  out["lattice"] = {{"v0", m.lattice.v0},
                    {"eta", m.lattice.eta},
                    {"alpha", m.lattice.alpha},
                    {"eta_cavity", m.lattice.eta_cavity},
                    {"refractive_shift", m.lattice.refractive_shift},
                    {"harmonic_ok", m.lattice.harmonic_ok}};
  return out.dump(2) + "\n";
}

std::string error_budget_report(const std::string& json_text) {
  const json doc = parse_document(json_text);
  expect_object(doc, "");
  check_keys(doc, "", {"omega", "delta1", "delta2", "tau", "d_eps3", "d_b3", "mu_b_per_gauss", "flip_detuning"});
  ImperfectionInput in;
  in.omega = number(doc, "", "omega");
  in.delta1 = number(doc, "", "delta1");
  in.delta2 = number(doc, "", "delta2");
  in.tau = number(doc, "", "tau");
  in.d_eps3 = number(doc, "", "d_eps3", 0.0);
  in.d_b3 = number(doc, "", "d_b3", 0.0);
  in.mu_b_per_gauss = number(doc, "", "mu_b_per_gauss", 0.0);
  const std::string which = text(doc, "", "flip_detuning", "delta1");
  if (which == "delta1") in.flip_detuning = FlipDetuning::Delta1;
  else if (which == "delta2") in.flip_detuning = FlipDetuning::Delta2;
  else fail("flip_detuning", "must be \"delta1\" or \"delta2\"");
  try {
    in.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const FlipEstimate flip = flip_probability(in);
  ojson out;
  out["p_flip"] = flip.probability;
  out["p_flip_beyond_perturbative"] = flip.beyond_perturbative;
  out["phi_rel"] = relative_phase(in);
  out["flip_detuning"] = which;
  return out.dump(2) + "\n";
}

}  // namespace cavcool
