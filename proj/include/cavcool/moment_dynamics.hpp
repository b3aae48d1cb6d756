#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavcool/core_model.hpp"

namespace cavcool {

/// Which Hamiltonian drives the dynamics: the full coupling
/// i g (c + c†)(a† - a), or its rotating-wave form i g (c a† - a c†).
enum class Dynamics { NonRWA, RWA };

const char* to_string(Dynamics mode);

/// Index of each second moment inside MomentVectorFull.
enum MomentIndex : std::size_t {
  kNc = 0,     // <c†c>
  kNa = 1,     // <a†a>
  kCa = 2,     // <c a>
  kCaDag = 3,  // <c a†>
  kCdagA = 4,  // <c† a>
  kCdagAdag = 5,  // <c† a†>
  kCc = 6,     // <c²>
  kAa = 7,     // <a²>
  kCdagCdag = 8,  // <c†²>
  kAdagAdag = 9,  // <a†²>
};

/// The ten second moments, each treated as an independent complex variable.
using MomentVectorFull = std::array<cplx, 10>;

/// (<c†c>, <a†a>, <c a†>, <c† a>): the closed set of the RWA dynamics.
using RwaVector = Eigen::Vector4cd;

MomentVectorFull to_full(const MomentState& state);
/// Inverse of to_full; the paired conjugate components are not read.
MomentState from_full(const MomentVectorFull& y, cplx mean_c = {}, cplx mean_a = {});

RwaVector to_rwa_vector(const MomentState& state);

/// Heisenberg equations of the ten second moments under the full coupling and
/// cavity loss. Affine: the <c a> and <c† a†> lines carry a +g_eff source.
MomentVectorFull rhs_nonrwa(const ModelParams& params, const MomentVectorFull& y);

/// Same as rhs_nonrwa for the rotating-wave Hamiltonian (homogeneous).
MomentVectorFull rhs_rwa(const ModelParams& params, const MomentVectorFull& y);

/// The RWA evolution matrix M acting on RwaVector.
Eigen::Matrix4cd rwa_matrix(const ModelParams& params);

/// d/dt of (<c>, <a>).
std::array<cplx, 2> first_moment_rhs(const ModelParams& params, cplx mean_c, cplx mean_a, Dynamics mode);

/// Time derivative of the reduced state (second moments and means).
MomentState moment_derivative(const ModelParams& params, const MomentState& state, Dynamics mode);

struct IntegratorSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;  // in units of 1/nu

  void validate() const;
};

struct TrajectoryPoint {
  double t = 0.0;
  MomentState state;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Integrate from y0 at times.front() and sample at every entry of `times`
/// (strictly increasing). Throws StepSizeUnderflow if the tolerances cannot
/// be met.
Trajectory integrate(const ModelParams& params, const MomentState& y0, std::span<const double> times,
                     const IntegratorSettings& settings, Dynamics mode);

/// Convenience overload: uniform samples t0, t0 + dt, ..., t1 (t1 always included).
Trajectory integrate(const ModelParams& params, const MomentState& y0, double t0, double t1, double sample_dt,
                     const IntegratorSettings& settings, Dynamics mode);

std::vector<double> sample_times(double t0, double t1, double dt);

/// <H> of the static Hamiltonian selected by `mode`.
double hamiltonian_expectation(const ModelParams& params, const MomentState& state, Dynamics mode);

}  // namespace cavcool
