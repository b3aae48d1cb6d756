#include "cavcool/spectral_steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "cavcool/errors.hpp"

namespace cavcool {
namespace {

constexpr double kDefectiveCondition = 1e8;

Vector10cd to_eigen(const MomentVectorFull& y) {
  Vector10cd v;
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = y[i];
  return v;
}

std::vector<cplx> eigenvalues_of(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw SingularSystem("eigenvalue solver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Eigen::MatrixXcd linear_part(const ModelParams& params, Dynamics mode) {
  if (mode == Dynamics::RWA) return rwa_matrix(params);
  return second_moment_system(params, Dynamics::NonRWA).linear;
}

double min_abs_real(const std::vector<cplx>& ev) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& l : ev) m = std::min(m, std::abs(l.real()));
  return m;
}

}  // namespace

AffineSystem second_moment_system(const ModelParams& params, Dynamics mode) {
  const auto rhs = [&](const MomentVectorFull& y) {
    return mode == Dynamics::RWA ? rhs_rwa(params, y) : rhs_nonrwa(params, y);
  };
  AffineSystem sys;
  const MomentVectorFull zero{};
  sys.source = to_eigen(rhs(zero));
  for (std::size_t j = 0; j < 10; ++j) {
    MomentVectorFull unit{};
    unit[j] = 1.0;
    sys.linear.col(static_cast<Eigen::Index>(j)) = to_eigen(rhs(unit)) - sys.source;
  }
  return sys;
}

std::vector<cplx> nonrwa_eigenvalues(const ModelParams& params) {
  return eigenvalues_of(second_moment_system(params, Dynamics::NonRWA).linear);
}

void certify_stable(const ModelParams& params, double tol) {
  params.validate();
  for (const auto& l : nonrwa_eigenvalues(params)) {
    if (!(l.real() < -tol)) {
      std::ostringstream msg;
      msg << "moment dynamics not asymptotically stable: eigenvalue " << l.real() << (l.imag() < 0 ? "" : "+")
          << l.imag() << "i";
      throw UnstableSystem(msg.str());
    }
  }
}

double steady_state_energy(const ModelParams& p) {
  p.validate();
  const double g2 = p.g_eff * p.g_eff;
  if (p.nu_c == 0.0) throw DegenerateDenominator("steady_state_energy: nu_c = 0");
  const double bracket = p.kappa * p.kappa * p.nu + 4.0 * p.nu_c * (-4.0 * g2 + p.nu * p.nu_c);
  const double scale = p.kappa * p.kappa * p.nu + 4.0 * std::abs(p.nu_c) * (4.0 * g2 + p.nu * std::abs(p.nu_c));
  if (std::abs(bracket) <= 1e-14 * scale)
    throw DegenerateDenominator("steady_state_energy: kappa² nu + 4 nu_c (nu nu_c - 4 g²) = 0");
  if (p.g_eff > 0.0) certify_stable(p);

  const double detuning = p.nu - p.nu_c;
  return g2 / (2.0 * p.nu) + (p.kappa * p.kappa + 4.0 * detuning * detuning) / (16.0 * p.nu_c) +
         8.0 * g2 * g2 * p.nu_c / (p.nu * bracket);
}

MomentState numeric_steady_state(const ModelParams& params) {
  params.validate();
  const AffineSystem sys = second_moment_system(params, Dynamics::NonRWA);
  Eigen::FullPivLU<Matrix10cd> lu(sys.linear);
  Vector10cd y;
  if (lu.isInvertible()) {
    y = lu.solve(-sys.source);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(sys.linear);
    y = cod.solve(-sys.source);
    const double residual = (sys.linear * y + sys.source).norm();
    if (residual > 1e-10 * (1.0 + sys.source.norm()))
      throw SingularSystem("numeric_steady_state: singular moment system without a fixed point");
  }
  MomentVectorFull full;
  for (std::size_t i = 0; i < 10; ++i) full[i] = y[static_cast<Eigen::Index>(i)];
  return from_full(full);
}

SpectralDecomposition spectral_decomposition(const ModelParams& params, const MomentState& y0, Dynamics mode) {
  params.validate();
  SpectralDecomposition out;
  out.mode = mode;
  out.nu = params.nu;

  Eigen::VectorXcd deviation;
  double steady_nc = 0.0;
  if (mode == Dynamics::RWA) {
    // The homogeneous RWA system relaxes to y = 0.
    out.linear = rwa_matrix(params);
    deviation = to_rwa_vector(y0);
  } else {
    out.linear = second_moment_system(params, Dynamics::NonRWA).linear;
    const MomentState ss = numeric_steady_state(params);
    steady_nc = ss.n_c;
    const MomentVectorFull a = to_full(y0), b = to_full(ss);
    deviation.resize(10);
    for (std::size_t i = 0; i < 10; ++i) deviation[static_cast<Eigen::Index>(i)] = a[i] - b[i];
  }
  out.deviation = deviation;
  out.steady_energy = params.nu * steady_nc;
  out.e0 = out.steady_energy;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(out.linear, true);
  if (solver.info() != Eigen::Success) throw SingularSystem("spectral_decomposition: eigen solver failed");
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  out.condition = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
  out.defective = !(out.condition <= kDefectiveCondition);

  const Eigen::VectorXcd w = v.fullPivLu().solve(deviation);
  const double lambda_scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const cplx lambda = solver.eigenvalues()[k];
    const cplx coeff = params.nu * v(0, k) * w[k];
    if (std::abs(lambda) <= 1e-13 * lambda_scale) {
      // Conserved component: part of the asymptotic energy.
      out.e0 += coeff.real();
      continue;
    }
    out.lambdas.push_back(lambda);
    out.coeffs.push_back(coeff);
  }
  return out;
}

double SpectralDecomposition::energy_at(double t) const {
  if (defective) {
    const Eigen::MatrixXcd prop = (linear * t).exp();
    return nu * (prop * deviation)[0].real() + steady_energy;
  }
  cplx sum = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) sum += coeffs[k] * std::exp(lambdas[k] * t);
  return sum.real() + e0;
}

double SpectralDecomposition::imag_residual_at(double t) const {
  cplx sum = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) sum += coeffs[k] * std::exp(lambdas[k] * t);
  return std::abs(sum.imag());
}

double SpectralDecomposition::slowest_rate(double threshold) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    if (std::abs(coeffs[k]) > threshold) m = std::min(m, std::abs(lambdas[k].real()));
  return m;
}

double cooling_time(const ModelParams& params, Dynamics mode) {
  certify_stable(params);
  const auto ev = eigenvalues_of(linear_part(params, mode));
  for (const auto& l : ev)
    if (!(l.real() < 0.0)) throw UnstableSystem("cooling_time: RWA matrix has a non-decaying eigenvalue");
  return 1.0 / min_abs_real(ev);
}

LimitEstimates limit_estimates(const ModelParams& p) {
  constexpr double kMuchLess = 0.2;
  const auto much_less = [](double x, double y) { return x <= kMuchLess * y; };
  const auto similar = [](double x, double y) { return x >= kMuchLess * y && x <= y / kMuchLess; };

  LimitEstimates e;
  const double g2 = p.g_eff * p.g_eff;
  e.doppler_tau = g2 > 0.0 ? p.kappa / (4.0 * g2) : std::numeric_limits<double>::infinity();
  e.doppler_temp = p.kappa / 4.0;
  e.sideband_tau = p.kappa > 0.0 ? 2.0 / p.kappa : std::numeric_limits<double>::infinity();
  e.sideband_temp = g2 / (2.0 * p.nu);

  if (much_less(p.g_eff, p.nu) && much_less(p.nu, p.kappa))
    e.regime = "doppler";
  else if (much_less(p.g_eff, p.nu) && much_less(p.kappa, p.nu) && similar(p.g_eff, p.kappa))
    e.regime = "sideband";
  else
    e.regime = "intermediate";
  return e;
}

double slow_oscillation_period(const ModelParams& params, Dynamics mode) {
  const auto ev = eigenvalues_of(linear_part(params, mode));
  const double slow = min_abs_real(ev);
  double omega = std::numeric_limits<double>::infinity();
  for (const auto& l : ev) {
    if (std::abs(l.real()) > 1.05 * slow + 1e-14) continue;
    if (std::abs(l.imag()) <= 1e-9 * (1.0 + std::abs(l))) continue;
    omega = std::min(omega, std::abs(l.imag()));
  }
  return std::isfinite(omega) ? 2.0 * std::numbers::pi / omega : 0.0;
}

namespace {

DecayFit linear_log_fit(std::span<const double> t, std::span<const double> r, const std::vector<std::size_t>& idx) {
  DecayFit fit;
  if (idx.size() < 2) return fit;
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (auto i : idx) {
    const double y = std::log(r[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double n = static_cast<double>(idx.size());
  const double denom = n * stt - st * st;
  if (!(std::abs(denom) > 0.0)) return fit;
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  fit.ok = slope < 0.0;
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  fit.points = idx.size();
  fit.t_begin = t[idx.front()];
  fit.t_end = t[idx.back()];
  return fit;
}

}  // namespace

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> energy, double e0, double t_begin,
                        double t_end, double peak_spacing) {
  if (t.size() != energy.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
  std::vector<double> r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = energy[i] - e0;

  if (peak_spacing > 0.0 && !t.empty()) {
    const double half = 0.5 * peak_spacing;
    std::vector<std::size_t> peaks;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < t_begin) continue;
      if (t[i] - half < t.front() || t[i] + half > t.back()) continue;
      if (!(r[i] > 0.0)) continue;
      while (t[lo] < t[i] - half) ++lo;
      while (hi + 1 < t.size() && t[hi + 1] <= t[i] + half) ++hi;
      bool is_peak = true;
      for (std::size_t j = lo; j <= hi && is_peak; ++j)
        if (r[j] > r[i]) is_peak = false;
      if (!is_peak) continue;
      if (t[i] > t_end && peaks.size() >= 3) break;
      peaks.push_back(i);
    }
    if (peaks.size() >= 2) return linear_log_fit(t, r, peaks);
  }

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_begin && t[i] <= t_end && r[i] > 0.0) idx.push_back(i);
  if (idx.size() < 3) return {};
  return linear_log_fit(t, r, idx);
}

}  // namespace cavcool
