#pragma once

namespace cavcool {

/// Which detuning enters the flip-probability estimate.
enum class FlipDetuning { Delta1, Delta2 };

struct ImperfectionInput {
  double omega = 0.0;   // laser Rabi frequency
  double delta1 = 0.0;  // detuning of |0> <-> |e1>
  double delta2 = 0.0;  // detuning of |1> <-> |e2>
  double tau = 0.0;     // exposure (cooling) time
  double d_eps3 = 0.0;  // polarization error along the quantization axis
  double d_b3 = 0.0;    // stray field along the quantization axis [Gauss]
  double mu_b_per_gauss = 0.0;  // mu_B * 1 G as a frequency
  FlipDetuning flip_detuning = FlipDetuning::Delta1;

  void validate() const;
};

struct FlipEstimate {
  double probability = 0.0;
  /// Set when the perturbative estimate exceeds 0.1 and should not be trusted.
  bool beyond_perturbative = false;
};

/// Inputs in units of the trap frequency nu = 2 pi x 100 kHz, consistent with
/// a standing-wave lattice: eta = 0.12 and Omega² / Delta1 = nu / eta², with
/// Delta1 = Delta2 = 2e6 nu, tau = 20 / nu, d_eps3 = 1e-4, d_B3 = 1 G and
/// mu_B x 1 G = 1.4 MHz = 14 nu.
ImperfectionInput typical_imperfection_input();

/// P_flip = Omega⁴ tau² d_eps3² / (18 Delta²).
FlipEstimate flip_probability(const ImperfectionInput& inp);

/// phi_rel = Omega² / (2 Delta2²) * tau * mu_B * d_B3 (raw accumulated phase).
double relative_phase(const ImperfectionInput& inp);

}  // namespace cavcool
