#include "cavcool/physical_mapping.hpp"

#include <cmath>
#include <stdexcept>

#include "cavcool/errors.hpp"

namespace cavcool {
namespace {

double lamb_dicke(double k, double m, double nu) { return std::sqrt(k * k / (2.0 * m * nu)); }

}  // namespace

void RingCavityConfig::validate() const {
  if (delta == 0.0) throw InvalidRegime("ring cavity: delta must be nonzero");
  if (!(m > 0.0)) throw InvalidRegime("ring cavity: m must be > 0");
  if (!(k > 0.0)) throw InvalidRegime("ring cavity: k must be > 0");
  if (!(kappa > 0.0)) throw InvalidRegime("ring cavity: kappa must be > 0");
  if (!(coupling_scale > 0.0)) throw InvalidRegime("ring cavity: coupling_scale must be > 0");
}

void StandingWaveConfig::validate() const {
  if (delta == 0.0) throw InvalidRegime("standing wave: delta must be nonzero");
  if (!(m > 0.0) || !(k > 0.0) || !(k_c > 0.0))
    throw InvalidRegime("standing wave: m, k and k_c must be > 0");
  if (!(kappa >= 0.0)) throw InvalidRegime("standing wave: kappa must be >= 0");
}

cplx steady_cavity_amplitude(const RingCavityConfig& c) {
  return std::sqrt(2.0 * c.kappa) * c.beta_in / cplx(0.5 * c.kappa, -c.delta_c);
}

MappedModel ring_model_params(const RingCavityConfig& c) {
  c.validate();
  const double alpha = std::abs(steady_cavity_amplitude(c));
  // |delta| keeps the trap frequency consistent with nu = k sqrt(2 V0 / m).
  const double nu = 2.0 * c.g * alpha * c.k / std::sqrt(c.m * std::abs(c.delta));
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw InvalidRegime("ring cavity: no trap (nu = 2 g alpha k / sqrt(m |delta|) is not positive)");

  MappedModel out;
  auto& lat = out.lattice;
  lat.alpha = alpha;
  lat.v0 = 2.0 * c.g * c.g * alpha * alpha / std::abs(c.delta);
  lat.eta = lamb_dicke(c.k, c.m, nu);
  lat.refractive_shift = 2.0 * c.g * c.g / c.delta;
  lat.harmonic_ok = nu / (4.0 * lat.v0) <= 0.1;

  out.params.nu = nu;
  out.params.nu_c = -c.delta_c + lat.refractive_shift;
  out.params.g_eff = c.coupling_scale * nu / (alpha * lat.eta);
  out.params.kappa = c.kappa;
  return out;
}

MappedModel standing_model_params(const StandingWaveConfig& c) {
  c.validate();
  if (c.omega == 0.0) throw InvalidRegime("standing wave: Omega = 0, no lattice");

  // nu = Omega² eta² / delta with eta² = k² / (2 m nu)  =>  nu² = Omega² k² / (2 m delta).
  const double nu_squared = c.omega * c.omega * c.k * c.k / (2.0 * c.m * c.delta);
  if (!(nu_squared > 0.0)) throw InvalidRegime("standing wave: nu = Omega² eta² / delta is not positive");
  double nu = std::sqrt(nu_squared);

  const auto image = [&](double x) {
    const double eta = lamb_dicke(c.k, c.m, x);
    return c.omega * c.omega * eta * eta / c.delta;
  };
  if (!std::isfinite(nu) || std::abs(image(nu) - nu) > 1e-12 * nu) {
    // Fixed point of nu = image(nu); the geometric mean damps the 2-cycle of
    // the plain iteration.
    nu = std::isfinite(nu) && nu > 0.0 ? nu : 1.0;
    bool converged = false;
    for (int it = 0; it < 200 && !converged; ++it) {
      const double next = std::sqrt(nu * image(nu));
      converged = std::abs(next - nu) <= 1e-12 * next;
      nu = next;
    }
    if (!converged || !(nu > 0.0)) throw InvalidRegime("standing wave: self-consistent (nu, eta) not found");
  }

  MappedModel out;
  auto& lat = out.lattice;
  lat.eta = lamb_dicke(c.k, c.m, nu);
  lat.eta_cavity = lamb_dicke(c.k_c, c.m, nu);
  // Depth of Omega² sin²(kx) / (4 |delta|), consistent with nu = k sqrt(2 V0 / m).
  lat.v0 = c.omega * c.omega / (4.0 * std::abs(c.delta));
  lat.refractive_shift = c.g * c.g / c.delta;
  lat.harmonic_ok = nu / (4.0 * lat.v0) <= 0.1;

  out.params.nu = nu;
  out.params.nu_c = -c.delta_c + lat.refractive_shift;
  out.params.g_eff = std::abs(c.g * c.omega * lat.eta / (2.0 * c.delta));
  out.params.kappa = c.kappa;
  return out;
}

ModelParams n_qubit_params(const ModelParams& params, double single_particle_shift, int n) {
  if (n < 1) throw std::invalid_argument("n_qubit_params: n must be >= 1");
  ModelParams out = params;
  out.g_eff = std::sqrt(static_cast<double>(n)) * params.g_eff;
  out.nu_c = params.nu_c + static_cast<double>(n - 1) * single_particle_shift;
  return out;
}

}  // namespace cavcool
