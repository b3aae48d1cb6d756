#include "cavcool/imperfections.hpp"

#include <cmath>
#include <stdexcept>

namespace cavcool {

void ImperfectionInput::validate() const {
  if (!(tau >= 0.0)) throw std::invalid_argument("imperfections: tau must be >= 0");
  if (delta2 == 0.0) throw std::invalid_argument("imperfections: delta2 must be nonzero");
  if (flip_detuning == FlipDetuning::Delta1 && delta1 == 0.0)
    throw std::invalid_argument("imperfections: delta1 must be nonzero");
}

ImperfectionInput typical_imperfection_input() {
  constexpr double eta = 0.12;
  ImperfectionInput in;
  in.delta1 = 2e6;
  in.delta2 = 2e6;
  in.omega = std::sqrt(in.delta1 / (eta * eta));
  in.tau = 20.0;
  in.d_eps3 = 1e-4;
  in.d_b3 = 1.0;
  in.mu_b_per_gauss = 14.0;
  return in;
}

FlipEstimate flip_probability(const ImperfectionInput& inp) {
  inp.validate();
  const double delta = inp.flip_detuning == FlipDetuning::Delta1 ? inp.delta1 : inp.delta2;
  const double stark = inp.omega * inp.omega / delta;  // Omega² / Delta
  FlipEstimate e;
  e.probability = stark * stark * inp.tau * inp.tau * inp.d_eps3 * inp.d_eps3 / 18.0;
  e.beyond_perturbative = e.probability > 0.1;
  return e;
}

double relative_phase(const ImperfectionInput& inp) {
  inp.validate();
  return inp.omega * inp.omega / (2.0 * inp.delta2 * inp.delta2) * inp.tau * inp.mu_b_per_gauss * inp.d_b3;
}

}  // namespace cavcool
