#pragma once

#include "cavcool/core_model.hpp"

namespace cavcool {

/// Ring cavity driven symmetrically from both sides. Units with hbar = 1:
/// g, delta, delta_c, kappa are angular frequencies and k²/m is a frequency.
struct RingCavityConfig {
  double g = 0.0;        // single-photon Rabi frequency
  double delta = 0.0;    // laser-atom detuning (nonzero)
  double delta_c = 0.0;  // laser-cavity detuning
  double kappa = 0.0;    // cavity loss rate (> 0)
  double k = 1.0;        // laser wavevector
  double m = 1.0;        // atomic mass
  cplx beta_in{};        // drive amplitude per input port
  /// g_eff = coupling_scale * nu / (alpha * eta); 0.5 is the canonical
  /// reading nu / (2 alpha eta).
  double coupling_scale = 0.5;

  void validate() const;
};

/// Standing-wave cavity with the lattice formed by an external laser pair.
struct StandingWaveConfig {
  double g = 0.0;
  double omega = 0.0;  // classical laser Rabi frequency
  double delta = 0.0;
  double delta_c = 0.0;
  double kappa = 0.0;
  double k = 1.0;    // laser wavevector
  double k_c = 1.0;  // cavity wavevector
  double m = 1.0;

  void validate() const;
};

struct DerivedLattice {
  double v0 = 0.0;     // lattice depth
  double eta = 0.0;    // Lamb-Dicke parameter sqrt(k² / (2 m nu))
  double alpha = 0.0;  // |intracavity amplitude| (ring) or 0 (standing wave)
  /// Lamb-Dicke parameter built from the cavity wavevector (standing wave).
  double eta_cavity = 0.0;
  /// Single-particle refractive shift of the cavity frequency.
  double refractive_shift = 0.0;
  /// Harmonic-well validity: zero-point kinetic energy nu/4 well below V0.
  /// Reported only; true when nu / (4 V0) <= 0.1.
  bool harmonic_ok = false;
};

struct MappedModel {
  ModelParams params;
  DerivedLattice lattice;
};

/// alpha = sqrt(2 kappa) beta_in / (-i delta_c + kappa/2); the odd mode has
/// zero mean.
cplx steady_cavity_amplitude(const RingCavityConfig& config);

/// Ring cavity: nu = 2 g |alpha| k / sqrt(m |delta|), nu_c = -delta_c + 2g²/delta,
/// V0 = 2 g² |alpha|² / |delta|, eta = sqrt(k²/(2 m nu)). Throws InvalidRegime
/// if no trap forms (nu not positive and finite).
MappedModel ring_model_params(const RingCavityConfig& config);

/// Standing wave: nu = Omega² eta² / delta, nu_c = -delta_c + g²/delta,
/// g_eff = g Omega eta / (2 delta), with eta = sqrt(k²/(2 m nu)) solved
/// self-consistently. Throws InvalidRegime unless a positive nu exists.
MappedModel standing_model_params(const StandingWaveConfig& config);

/// Centre-of-mass mode of n identical atoms: g_eff -> sqrt(n) g_eff and
/// nu_c -> nu_c + (n - 1) * single_particle_shift.
ModelParams n_qubit_params(const ModelParams& params, double single_particle_shift, int n);

}  // namespace cavcool
