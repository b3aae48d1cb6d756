#include "cavcool/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavcool {

void ModelParams::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("ModelParams: nu must be > 0");
  if (!(g_eff >= 0.0)) throw std::invalid_argument("ModelParams: g_eff must be >= 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("ModelParams: kappa must be >= 0");
  if (!std::isfinite(nu_c)) throw std::invalid_argument("ModelParams: nu_c must be finite");
}

MomentState coherent_initial_state(cplx beta_c, cplx beta_a) {
  MomentState s;
  s.mean_c = beta_c;
  s.mean_a = beta_a;
  s.n_c = std::norm(beta_c);
  s.n_a = std::norm(beta_a);
  s.cc = beta_c * beta_c;
  s.aa = beta_a * beta_a;
  s.ca = beta_c * beta_a;
  s.ca_dag = beta_c * std::conj(beta_a);
  return s;
}

double atom_energy(const MomentState& state, const ModelParams& params) {
  return params.nu * state.n_c;
}

double cavity_energy(const MomentState& state, const ModelParams& params) {
  return params.nu_c * state.n_a;
}

EnergyRecord energy_record(double t, const MomentState& state, const ModelParams& params) {
  return {t, atom_energy(state, params), cavity_energy(state, params)};
}

Eigen::Matrix4d covariance_matrix(const MomentState& s) {
  const double nc = s.n_c - std::norm(s.mean_c);
  const double na = s.n_a - std::norm(s.mean_a);
  const cplx c2 = s.cc - s.mean_c * s.mean_c;
  const cplx a2 = s.aa - s.mean_a * s.mean_a;
  const cplx ca = s.ca - s.mean_c * s.mean_a;
  const cplx cad = s.ca_dag - s.mean_c * std::conj(s.mean_a);

  Eigen::Matrix4d sigma;
  sigma(0, 0) = nc + c2.real() + 0.5;
  sigma(1, 1) = nc - c2.real() + 0.5;
  sigma(0, 1) = c2.imag();
  sigma(2, 2) = na + a2.real() + 0.5;
  sigma(3, 3) = na - a2.real() + 0.5;
  sigma(2, 3) = a2.imag();
  sigma(0, 2) = ca.real() + cad.real();
  sigma(0, 3) = ca.imag() - cad.imag();
  sigma(1, 2) = ca.imag() + cad.imag();
  sigma(1, 3) = cad.real() - ca.real();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) sigma(i, j) = sigma(j, i);
  return sigma;
}

MomentState from_covariance(const Eigen::Matrix4d& sigma, cplx mean_c, cplx mean_a) {
  const double nc = 0.5 * (sigma(0, 0) + sigma(1, 1)) - 0.5;
  const double na = 0.5 * (sigma(2, 2) + sigma(3, 3)) - 0.5;
  const cplx c2{0.5 * (sigma(0, 0) - sigma(1, 1)), sigma(0, 1)};
  const cplx a2{0.5 * (sigma(2, 2) - sigma(3, 3)), sigma(2, 3)};
  const cplx ca{0.5 * (sigma(0, 2) - sigma(1, 3)), 0.5 * (sigma(0, 3) + sigma(1, 2))};
  const cplx cad{0.5 * (sigma(0, 2) + sigma(1, 3)), 0.5 * (sigma(1, 2) - sigma(0, 3))};

  MomentState s;
  s.mean_c = mean_c;
  s.mean_a = mean_a;
  s.n_c = nc + std::norm(mean_c);
  s.n_a = na + std::norm(mean_a);
  s.cc = c2 + mean_c * mean_c;
  s.aa = a2 + mean_a * mean_a;
  s.ca = ca + mean_c * mean_a;
  s.ca_dag = cad + mean_c * std::conj(mean_a);
  return s;
}

std::array<double, 2> symplectic_eigenvalues(const MomentState& state) {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  const Eigen::Matrix4d m = omega * covariance_matrix(state);
  Eigen::EigenSolver<Eigen::Matrix4d> solver(m, false);
  std::array<double, 4> v{};
  for (int i = 0; i < 4; ++i) v[i] = std::abs(solver.eigenvalues()[i].imag());
  std::sort(v.begin(), v.end());
  return {v[0], v[2]};
}

bool is_physical(const MomentState& state, double tol) {
  if (state.n_c < std::norm(state.mean_c) - tol) return false;
  if (state.n_a < std::norm(state.mean_a) - tol) return false;
  const auto nu = symplectic_eigenvalues(state);
  if (nu[0] < 0.5 - tol) return false;
  // Symplectic eigenvalues alone do not exclude a negative-definite sigma.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(covariance_matrix(state), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > -tol;
}

}  // namespace cavcool
