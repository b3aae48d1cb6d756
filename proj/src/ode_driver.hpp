#pragma once

// Internal: adaptive Dormand-Prince integration of a reduced MomentState.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cavcool/errors.hpp"
#include "cavcool/moment_dynamics.hpp"

namespace cavcool::detail {

using PackedState = std::array<double, 14>;
using MomentRhs = std::function<MomentState(double, const MomentState&)>;

inline PackedState pack(const MomentState& s) {
  return {s.n_c,          s.n_a,          s.ca.real(),     s.ca.imag(),     s.ca_dag.real(),
          s.ca_dag.imag(), s.cc.real(),    s.cc.imag(),     s.aa.real(),     s.aa.imag(),
          s.mean_c.real(), s.mean_c.imag(), s.mean_a.real(), s.mean_a.imag()};
}

inline MomentState unpack(const PackedState& x) {
  MomentState s;
  s.n_c = x[0];
  s.n_a = x[1];
  s.ca = {x[2], x[3]};
  s.ca_dag = {x[4], x[5]};
  s.cc = {x[6], x[7]};
  s.aa = {x[8], x[9]};
  s.mean_c = {x[10], x[11]};
  s.mean_a = {x[12], x[13]};
  return s;
}

/// Integrates from y0 at times[0]; returns the state at every entry of times.
inline std::vector<MomentState> integrate_reduced(const MomentRhs& rhs, const MomentState& y0,
                                                  std::span<const double> times,
                                                  const IntegratorSettings& settings) {
  namespace odeint = boost::numeric::odeint;
  settings.validate();
  std::vector<MomentState> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  if (times.size() == 1) {
    out.push_back(y0);
    return out;
  }

  double max_gap = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("integrate: sample times must increase");
    max_gap = std::max(max_gap, times[i] - times[i - 1]);
  }

  auto system = [&rhs](const PackedState& x, PackedState& dxdt, double t) { dxdt = pack(rhs(t, unpack(x))); };
  auto observer = [&out](const PackedState& x, double) { out.push_back(unpack(x)); };

  auto stepper = odeint::make_dense_output(settings.abs_tol, settings.rel_tol, settings.max_step,
                                           odeint::runge_kutta_dopri5<PackedState>());
  const double dt0 = std::min(settings.max_step, 1e-3);
  // The checker bounds steps between two observer calls; with max_step the
  // floor is max_gap / max_step, the rest is headroom for rejected steps.
  const int step_budget = static_cast<int>(std::ceil(max_gap / settings.max_step)) * 100 + 100000;

  PackedState x = pack(y0);
  try {
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt0, observer,
                            odeint::max_step_checker(step_budget));
  } catch (const odeint::odeint_error& e) {
    throw StepSizeUnderflow(std::string("integrator could not meet tolerances: ") + e.what());
  }
  for (const auto& s : out) {
    if (!std::isfinite(s.n_c) || !std::isfinite(s.n_a))
      throw StepSizeUnderflow("integrator produced a non-finite state");
  }
  return out;
}

}  // namespace cavcool::detail
