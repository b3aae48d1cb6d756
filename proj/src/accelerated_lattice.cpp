#include "cavcool/accelerated_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ode_driver.hpp"

namespace cavcool {

double PhaseProfile::cavity_frequency(const ModelParams& params, double t) const {
  if (freeze_cavity_frequency || cavity_shift == 0.0) return params.nu_c;
  const double c = std::cos(phi(t));
  return params.nu_c + cavity_shift * (c * c - 1.0);
}

PhaseProfile make_transport_profile(double displacement, double duration, RampShape shape, double eta,
                                    double cooling_on_time, double g_bare) {
  if (!(duration > 0.0)) throw std::invalid_argument("make_transport_profile: duration must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("make_transport_profile: eta must be > 0");

  const double total = displacement;
  const double T = duration;
  PhaseProfile p;
  p.eta = eta;
  p.cooling_on_time = cooling_on_time;
  p.g_bare = g_bare;
  p.breakpoints = {0.0, T};

  if (shape == RampShape::RaisedCosine) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    p.phi = [=](double t) {
      if (t <= 0.0) return 0.0;
      if (t >= T) return total;
      const double s = t / T;
      return total * (s - std::sin(two_pi * s) / two_pi);
    };
    p.phi_dot = [=](double t) {
      if (t <= 0.0 || t >= T) return 0.0;
      return total / T * (1.0 - std::cos(two_pi * t / T));
    };
  } else {
    p.phi = [=](double t) {
      if (t <= 0.0) return 0.0;
      if (t >= T) return total;
      const double s = t / T;
      return total * s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
    };
    p.phi_dot = [=](double t) {
      if (t <= 0.0 || t >= T) return 0.0;
      const double s = t / T;
      return total / T * 30.0 * s * s * (1.0 - s) * (1.0 - s);
    };
  }
  return p;
}

double profile_consistency_error(const PhaseProfile& profile, double t0, double t1, int samples) {
  const double h = 1e-5 * std::max(1.0, t1 - t0);
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = t0 + (t1 - t0) * i / samples;
    const double fd = (profile.phi(t + h) - profile.phi(t - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - profile.phi_dot(t)));
  }
  return worst;
}

MomentState accel_rhs(const ModelParams& params, const PhaseProfile& profile, double t, const MomentState& state) {
  return accel_rhs(params, profile, t, state, profile.cooling_switch(t));
}

MomentState accel_rhs(const ModelParams& params, const PhaseProfile& profile, double t, const MomentState& state,
                      double cooling_switch) {
  const double phi = profile.phi(t);
  const double alpha = phi / profile.eta;
  const double coupling = cooling_switch * profile.g_bare * std::cos(phi);

  ModelParams inst = params;
  inst.g_eff = coupling;
  inst.nu_c = profile.cavity_frequency(params, t);

  MomentState d = from_full(rhs_nonrwa(inst, to_full(state)));
  auto means = first_moment_rhs(inst, state.mean_c, state.mean_a, Dynamics::NonRWA);

  // Linear drives: trap displacement on c, displaced coupling on a.
  const cplx fc{0.0, 0.5 * params.nu * alpha};
  const cplx fa = -coupling * alpha;
  const cplx mc = state.mean_c, ma = state.mean_a;
  d.mean_c = means[0] + fc;
  d.mean_a = means[1] + fa;
  d.n_c += 2.0 * (std::conj(fc) * mc).real();
  d.n_a += 2.0 * (std::conj(fa) * ma).real();
  d.ca += fc * ma + mc * fa;
  d.ca_dag += fc * std::conj(ma) + mc * std::conj(fa);
  d.cc += 2.0 * fc * mc;
  d.aa += 2.0 * fa * ma;
  return d;
}

double transport_energy(const MomentState& s, const ModelParams& params, const PhaseProfile& profile, double t) {
  const double nu = params.nu;
  const double alpha = profile.lattice_alpha(t);
  const double alpha_dot = profile.lattice_alpha_dot(t);
  const cplx c = s.mean_c;
  const cplx kinetic = cplx(0.0, -0.5 * nu * alpha_dot) * (std::conj(c) - c);
  return nu * s.n_c - 0.5 * nu * alpha * (c + std::conj(c)).real() + 0.25 * nu * nu * alpha * alpha +
         kinetic.real() + 0.25 * nu * nu * alpha_dot;
}

double comoving_energy(const MomentState& s, const ModelParams& params, const PhaseProfile& profile, double t) {
  const double nu = params.nu;
  const cplx b{0.5 * profile.lattice_alpha(t), 0.5 * profile.lattice_alpha_dot(t) / nu};
  return nu * (s.n_c - 2.0 * (std::conj(b) * s.mean_c).real() + std::norm(b));
}

double x_mean(const MomentState& state, const PhaseProfile& profile) {
  return 2.0 * profile.eta * state.mean_c.real();
}

std::vector<TransportState> integrate_transport(const ModelParams& params, const PhaseProfile& profile,
                                                const MomentState& y0, std::span<const double> times,
                                                const IntegratorSettings& settings) {
  params.validate();
  std::vector<TransportState> out;
  if (times.empty()) return out;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("integrate_transport: times must increase");

  const double t0 = times.front(), t1 = times.back();
  std::vector<double> cuts{t0};
  std::vector<double> interior = profile.breakpoints;
  interior.push_back(profile.cooling_on_time);
  std::sort(interior.begin(), interior.end());
  for (double b : interior)
    if (b > cuts.back() && b < t1) cuts.push_back(b);
  cuts.push_back(t1);

  out.reserve(times.size());
  out.push_back({t0, y0, x_mean(y0, profile)});
  MomentState state = y0;
  std::size_t next = 1;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double a = cuts[seg], b = cuts[seg + 1];
    const double sw = a >= profile.cooling_on_time ? 1.0 : 0.0;
    // Requested samples in (a, b]; a itself was emitted by the previous segment.
    std::vector<double> ts{a};
    const std::size_t first = next;
    while (next < times.size() && times[next] <= b) ts.push_back(times[next++]);
    if (ts.back() != b) ts.push_back(b);

    const detail::MomentRhs rhs = [&, sw](double t, const MomentState& s) {
      return accel_rhs(params, profile, t, s, sw);
    };
    const auto states = detail::integrate_reduced(rhs, state, ts, settings);
    for (std::size_t i = first; i < next; ++i) {
      const auto& s = states[i - first + 1];
      out.push_back({times[i], s, x_mean(s, profile)});
    }
    state = states.back();
  }
  return out;
}

}  // namespace cavcool
