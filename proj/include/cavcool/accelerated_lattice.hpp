#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cavcool/core_model.hpp"
#include "cavcool/moment_dynamics.hpp"

namespace cavcool {

enum class RampShape { RaisedCosine, MinimumJerk };

/// Time-dependent relative laser phase phi(t) that moves the lattice, plus
/// the cooling switch. Positions are measured in units of 1/k, so the
/// equilibrium position is x0(t) = phi(t) and the scaled lattice displacement
/// is lattice_alpha = phi / eta. Quadrature convention: x = (eta/k)(c + c†).
struct PhaseProfile {
  std::function<double(double)> phi = [](double) { return 0.0; };
  std::function<double(double)> phi_dot = [](double) { return 0.0; };
  double eta = 1.0;
  double cooling_on_time = 0.0;  // coupling is off for t < cooling_on_time
  double g_bare = 0.0;
  /// Refractive shift g²/Delta: nu_c(t) = nu_c + cavity_shift (cos²phi - 1),
  /// where nu_c is the cavity frequency at phi = 0.
  double cavity_shift = 0.0;
  bool freeze_cavity_frequency = false;
  /// Times where phi'' may be discontinuous (ramp start and end).
  std::vector<double> breakpoints;

  double lattice_alpha(double t) const { return phi(t) / eta; }
  double lattice_alpha_dot(double t) const { return phi_dot(t) / eta; }
  double cooling_switch(double t) const { return t >= cooling_on_time ? 1.0 : 0.0; }
  double cavity_frequency(const ModelParams& params, double t) const;
};

struct TransportState {
  double t = 0.0;
  MomentState moments;
  double x_mean = 0.0;  // <x> in units of 1/k
};

/// Lattice moved by `displacement` (units of 1/k) over [0, duration] with
/// zero start and end velocity.
PhaseProfile make_transport_profile(double displacement, double duration, RampShape shape, double eta,
                                    double cooling_on_time, double g_bare = 0.0);

/// Max |phi(t+h)-phi(t-h))/2h - phi_dot(t)| over `samples` points of [t0, t1].
double profile_consistency_error(const PhaseProfile& profile, double t0, double t1, int samples = 200);

/// Moment equations of the moving-lattice Hamiltonian with cavity loss:
/// the static structure with g_eff -> s(t) g cos(phi) and nu_c -> nu_c(t),
/// plus the drives +i nu alpha/2 on <c> and -s(t) g alpha cos(phi) on <a>.
MomentState accel_rhs(const ModelParams& params, const PhaseProfile& profile, double t, const MomentState& state);

/// Same with an explicit value of the cooling switch.
MomentState accel_rhs(const ModelParams& params, const PhaseProfile& profile, double t, const MomentState& state,
                      double cooling_switch);

/// Atomic energy in the transport frame, evaluated term by term as
/// nu<c†c> - (nu alpha/2)(<c>+<c†>) + nu² alpha²/4 - (i nu alpha'/2)(<c†>-<c>) + nu² alpha'/4.
double transport_energy(const MomentState& state, const ModelParams& params, const PhaseProfile& profile, double t);

/// Excitation energy relative to a coherent state co-moving with the trap,
/// nu <(c - b)†(c - b)> with b = alpha/2 + i alpha'/(2 nu). Agrees with
/// transport_energy when nu = 1 and alpha' = 0.
double comoving_energy(const MomentState& state, const ModelParams& params, const PhaseProfile& profile, double t);

double x_mean(const MomentState& state, const PhaseProfile& profile);

/// Integrate the moving-lattice moments, splitting at the switch-on time and
/// the profile breakpoints. `times` must be strictly increasing.
std::vector<TransportState> integrate_transport(const ModelParams& params, const PhaseProfile& profile,
                                                const MomentState& y0, std::span<const double> times,
                                                const IntegratorSettings& settings);

}  // namespace cavcool
