#include "cavcool/moment_dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "ode_driver.hpp"

namespace cavcool {

const char* to_string(Dynamics mode) { return mode == Dynamics::RWA ? "rwa" : "nonrwa"; }

MomentVectorFull to_full(const MomentState& s) {
  MomentVectorFull y;
  y[kNc] = s.n_c;
  y[kNa] = s.n_a;
  y[kCa] = s.ca;
  y[kCaDag] = s.ca_dag;
  y[kCdagA] = std::conj(s.ca_dag);
  y[kCdagAdag] = std::conj(s.ca);
  y[kCc] = s.cc;
  y[kAa] = s.aa;
  y[kCdagCdag] = std::conj(s.cc);
  y[kAdagAdag] = std::conj(s.aa);
  return y;
}

MomentState from_full(const MomentVectorFull& y, cplx mean_c, cplx mean_a) {
  MomentState s;
  s.n_c = y[kNc].real();
  s.n_a = y[kNa].real();
  s.ca = y[kCa];
  s.ca_dag = y[kCaDag];
  s.cc = y[kCc];
  s.aa = y[kAa];
  s.mean_c = mean_c;
  s.mean_a = mean_a;
  return s;
}

RwaVector to_rwa_vector(const MomentState& s) {
  RwaVector v;
  v << s.n_c, s.n_a, s.ca_dag, std::conj(s.ca_dag);
  return v;
}

// Each conjugate pair of lines is written with mirrored operand order so that
// a conjugation-symmetric input yields an exactly conjugation-symmetric output.
MomentVectorFull rhs_nonrwa(const ModelParams& p, const MomentVectorFull& y) {
  const double g = p.g_eff;
  const double g2 = 2.0 * p.g_eff;
  const double hk = 0.5 * p.kappa;
  const cplx nc = y[kNc], na = y[kNa];
  const cplx ca = y[kCa], cad = y[kCaDag], cda = y[kCdagA], cdad = y[kCdagAdag];
  const cplx c2 = y[kCc], a2 = y[kAa], cd2 = y[kCdagCdag], ad2 = y[kAdagAdag];

  MomentVectorFull d;
  d[kNc] = g * (ca - cad - cda + cdad);
  d[kNa] = g * (ca + cad + cda + cdad) - p.kappa * na;
  d[kCa] = g * (nc + na + c2 - a2) + cplx(-hk, -(p.nu + p.nu_c)) * ca + g;
  d[kCdagAdag] = g * (nc + na + cd2 - ad2) + cplx(-hk, p.nu + p.nu_c) * cdad + g;
  d[kCaDag] = g * (nc - na + c2 + ad2) + cplx(-hk, p.nu_c - p.nu) * cad;
  d[kCdagA] = g * (nc - na + cd2 + a2) + cplx(-hk, p.nu - p.nu_c) * cda;
  d[kCc] = g2 * (cad - ca) + cplx(0.0, -2.0 * p.nu) * c2;
  d[kCdagCdag] = g2 * (cda - cdad) + cplx(0.0, 2.0 * p.nu) * cd2;
  d[kAa] = g2 * (ca + cda) + cplx(-p.kappa, -2.0 * p.nu_c) * a2;
  d[kAdagAdag] = g2 * (cdad + cad) + cplx(-p.kappa, 2.0 * p.nu_c) * ad2;
  return d;
}

MomentVectorFull rhs_rwa(const ModelParams& p, const MomentVectorFull& y) {
  const double g = p.g_eff;
  const double g2 = 2.0 * p.g_eff;
  const double hk = 0.5 * p.kappa;
  const cplx nc = y[kNc], na = y[kNa];
  const cplx ca = y[kCa], cad = y[kCaDag], cda = y[kCdagA], cdad = y[kCdagAdag];
  const cplx c2 = y[kCc], a2 = y[kAa], cd2 = y[kCdagCdag], ad2 = y[kAdagAdag];

  MomentVectorFull d;
  d[kNc] = -g * (cad + cda);
  d[kNa] = g * (cad + cda) - p.kappa * na;
  d[kCa] = cplx(-hk, -(p.nu + p.nu_c)) * ca + g * (c2 - a2);
  d[kCdagAdag] = cplx(-hk, p.nu + p.nu_c) * cdad + g * (cd2 - ad2);
  d[kCaDag] = cplx(-hk, p.nu_c - p.nu) * cad + g * (nc - na);
  d[kCdagA] = cplx(-hk, p.nu - p.nu_c) * cda + g * (nc - na);
  d[kCc] = cplx(0.0, -2.0 * p.nu) * c2 - g2 * ca;
  d[kCdagCdag] = cplx(0.0, 2.0 * p.nu) * cd2 - g2 * cdad;
  d[kAa] = cplx(-p.kappa, -2.0 * p.nu_c) * a2 + g2 * ca;
  d[kAdagAdag] = cplx(-p.kappa, 2.0 * p.nu_c) * ad2 + g2 * cdad;
  return d;
}

Eigen::Matrix4cd rwa_matrix(const ModelParams& p) {
  const double g = p.g_eff;
  const double hk = 0.5 * p.kappa;
  Eigen::Matrix4cd m;
  // clang-format off
  m << 0.0, 0.0,      -g,                          -g,
       0.0, -p.kappa,  g,                           g,
       g,   -g,        cplx(-hk, p.nu_c - p.nu),    0.0,
       g,   -g,        0.0,                         cplx(-hk, p.nu - p.nu_c);
  // clang-format on
  return m;
}

std::array<cplx, 2> first_moment_rhs(const ModelParams& p, cplx mean_c, cplx mean_a, Dynamics mode) {
  const cplx cavity = cplx(-0.5 * p.kappa, -p.nu_c) * mean_a;
  if (mode == Dynamics::RWA) {
    return {cplx(0.0, -p.nu) * mean_c - p.g_eff * mean_a, cavity + p.g_eff * mean_c};
  }
  return {cplx(0.0, -p.nu) * mean_c + p.g_eff * (std::conj(mean_a) - mean_a),
          cavity + p.g_eff * (mean_c + std::conj(mean_c))};
}

MomentState moment_derivative(const ModelParams& params, const MomentState& state, Dynamics mode) {
  const MomentVectorFull y = to_full(state);
  const MomentVectorFull d = mode == Dynamics::RWA ? rhs_rwa(params, y) : rhs_nonrwa(params, y);
  const auto dm = first_moment_rhs(params, state.mean_c, state.mean_a, mode);
  return from_full(d, dm[0], dm[1]);
}

void IntegratorSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0))
    throw std::invalid_argument("IntegratorSettings: tolerances and max_step must be positive");
}

std::vector<double> sample_times(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_times: dt must be positive");
  if (!(t1 >= t0)) throw std::invalid_argument("sample_times: t1 < t0");
  std::vector<double> ts;
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9));
  ts.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) ts.push_back(t0 + static_cast<double>(i) * dt);
  if (t1 - ts.back() > 1e-9 * std::max(1.0, std::abs(t1))) ts.push_back(t1);
  else ts.back() = t1;
  return ts;
}

Trajectory integrate(const ModelParams& params, const MomentState& y0, std::span<const double> times,
                     const IntegratorSettings& settings, Dynamics mode) {
  params.validate();
  const detail::MomentRhs rhs = [&params, mode](double, const MomentState& s) {
    return moment_derivative(params, s, mode);
  };
  const auto states = detail::integrate_reduced(rhs, y0, times, settings);
  Trajectory traj;
  traj.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) traj.push_back({times[i], states[i]});
  return traj;
}

Trajectory integrate(const ModelParams& params, const MomentState& y0, double t0, double t1, double sample_dt,
                     const IntegratorSettings& settings, Dynamics mode) {
  const auto ts = sample_times(t0, t1, sample_dt);
  return integrate(params, y0, ts, settings, mode);
}

double hamiltonian_expectation(const ModelParams& p, const MomentState& s, Dynamics mode) {
  const double free = p.nu * s.n_c + p.nu_c * s.n_a;
  if (mode == Dynamics::RWA) return free - 2.0 * p.g_eff * s.ca_dag.imag();
  return free + 2.0 * p.g_eff * (s.ca.imag() - s.ca_dag.imag());
}

}  // namespace cavcool
