#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavcool/core_model.hpp"
#include "cavcool/moment_dynamics.hpp"

namespace cavcool {

using Matrix10cd = Eigen::Matrix<cplx, 10, 10>;
using Vector10cd = Eigen::Matrix<cplx, 10, 1>;

/// Affine form dy/dt = L y + s of the second-moment system selected by `mode`.
/// For RWA the source vanishes.
struct AffineSystem {
  Matrix10cd linear;
  Vector10cd source;
};

AffineSystem second_moment_system(const ModelParams& params, Dynamics mode);

/// Eigenvalues of the non-RWA linear part (the stability certificate).
std::vector<cplx> nonrwa_eigenvalues(const ModelParams& params);

/// Throws UnstableSystem unless every non-RWA eigenvalue has Re < -tol.
void certify_stable(const ModelParams& params, double tol = 1e-12);

/// Closed-form steady atomic energy E0 = nu <c†c>_ss (k_B T_f):
///
///   E0 = g²/(2nu) + (kappa² + 4(nu - nu_c)²)/(16 nu_c)
///        + 8 g⁴ nu_c / (nu [kappa² nu + 4 nu_c (nu nu_c - 4 g²)])
///
/// Throws DegenerateDenominator when nu_c = 0 or the bracket vanishes, and
/// UnstableSystem when the non-RWA dynamics is not asymptotically stable. At
/// g_eff = 0 the atom decouples; the formula's g -> 0+ limit is returned
/// without a stability check.
double steady_state_energy(const ModelParams& params);

/// Fixed point of the non-RWA moment equations (means are zero). When the
/// linear part is singular but the fixed-point equation is consistent (e.g.
/// g_eff = 0), the minimum-norm fixed point is returned; otherwise throws
/// SingularSystem.
MomentState numeric_steady_state(const ModelParams& params);

/// E_atom(t) = sum_k c_k exp(lambda_k t) + e0 for a given initial state.
struct SpectralDecomposition {
  Dynamics mode = Dynamics::NonRWA;
  std::vector<cplx> lambdas;
  std::vector<cplx> coeffs;
  double e0 = 0.0;
  /// Eigenvector condition number; above 1e8 the basis is treated as defective.
  double condition = 1.0;
  bool defective = false;

  /// Reconstructed E_atom(t). Uses dense propagation when defective.
  double energy_at(double t) const;
  /// Imaginary part of the eigen-sum at t (should vanish).
  double imag_residual_at(double t) const;
  /// min |Re lambda_k| over terms whose |c_k| exceeds `threshold`.
  double slowest_rate(double threshold = 1e-12) const;

  // Dense fallback data.
  Eigen::MatrixXcd linear;
  Eigen::VectorXcd deviation;  // y0 - y_ss
  double steady_energy = 0.0;  // nu * y_ss[<c†c>]
  double nu = 1.0;
};

SpectralDecomposition spectral_decomposition(const ModelParams& params, const MomentState& y0, Dynamics mode);

/// Upper bound for the cooling time, tau = 1 / min_k |Re lambda_k| of the
/// linear part selected by `mode` (non-RWA stability is always certified).
double cooling_time(const ModelParams& params, Dynamics mode);

struct LimitEstimates {
  double doppler_tau = 0.0;    // kappa / (4 g²)
  double doppler_temp = 0.0;   // kappa / 4
  double sideband_tau = 0.0;   // 2 / kappa
  double sideband_temp = 0.0;  // g² / (2 nu)
  std::string regime;          // "doppler", "sideband" or "intermediate"
};

/// Regime labels use "x << y" := x/y <= 0.2 and "x ~ y" := 0.2 <= x/y <= 5.
LimitEstimates limit_estimates(const ModelParams& params);

/// Result of fitting log(E(t) - e0) with a straight line.
struct DecayFit {
  bool ok = false;
  double rate = 0.0;  // positive for decay
  double amplitude = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log(E - e0) over [t_begin, t_end]. With
/// peak_spacing > 0 only local maxima of E - e0 that dominate a +/- half
/// spacing neighbourhood are used (upper envelope of an oscillating decay),
/// and the window end is extended along the data until three such peaks exist.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> energy, double e0, double t_begin,
                        double t_end, double peak_spacing = 0.0);

/// Period of the slowest-decaying oscillation in the spectrum, or 0 if the
/// slow eigenvalues are real. Used as peak spacing for fit_decay_rate.
double slow_oscillation_period(const ModelParams& params, Dynamics mode);

}  // namespace cavcool
