#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace cavcool {

using cplx = std::complex<double>;

/// Abstract two-oscillator model: atomic motion c (trap frequency nu) coupled
/// to the damped cavity mode a (frequency nu_c, loss rate kappa).
///
/// All frequencies and rates are in units of the trap frequency by convention
/// (nu = 1 canonical); times are in units of 1/nu. No stability guarantee is
/// attached to a parameter set, see spectral_steady.hpp for that.
struct ModelParams {
  double nu = 1.0;
  double nu_c = 1.0;
  double g_eff = 0.0;
  double kappa = 0.0;

  /// Throws std::invalid_argument unless nu > 0, g_eff >= 0, kappa >= 0.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// First and second moments of the two modes.
///
/// Only six second moments are stored; the remaining four are conjugates:
/// <c†a> = conj(ca_dag), <c†a†> = conj(ca), <c†²> = conj(cc), <a†²> = conj(aa).
/// All second moments are raw (non-central) expectation values.
struct MomentState {
  double n_c = 0.0;  // <c†c>
  double n_a = 0.0;  // <a†a>
  cplx ca{};         // <c a>
  cplx ca_dag{};     // <c a†>
  cplx cc{};         // <c²>
  cplx aa{};         // <a²>
  cplx mean_c{};     // <c>
  cplx mean_a{};     // <a>

  friend bool operator==(const MomentState&, const MomentState&) = default;
};

struct EnergyRecord {
  double t = 0.0;
  double e_atom = 0.0;
  double e_cavity = 0.0;
};

/// Moments of the product coherent state |beta_c> ⊗ |beta_a>.
MomentState coherent_initial_state(cplx beta_c, cplx beta_a);

inline MomentState vacuum_state() { return {}; }

/// E_atom = nu <c†c>.
double atom_energy(const MomentState& state, const ModelParams& params);

/// E_cavity = nu_c <a†a>.
double cavity_energy(const MomentState& state, const ModelParams& params);

EnergyRecord energy_record(double t, const MomentState& state, const ModelParams& params);

/// Quadrature covariance of (x_c, p_c, x_a, p_a), with x = (b + b†)/√2 and
/// p = (b - b†)/(i√2), sigma_ij = <{ΔR_i, ΔR_j}>/2. Vacuum gives I/2.
Eigen::Matrix4d covariance_matrix(const MomentState& state);

/// Inverse of covariance_matrix for a given pair of first moments.
MomentState from_covariance(const Eigen::Matrix4d& sigma, cplx mean_c, cplx mean_a);

/// The two symplectic eigenvalues of the covariance matrix, ascending.
/// Physical states have both >= 1/2.
std::array<double, 2> symplectic_eigenvalues(const MomentState& state);

/// Assertion utility: sigma + (i/2) Omega >= 0 up to tol, and n >= |mean|².
bool is_physical(const MomentState& state, double tol = 1e-9);

}  // namespace cavcool
