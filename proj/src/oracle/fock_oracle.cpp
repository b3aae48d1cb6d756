#include "cavcool/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cavcool/errors.hpp"

namespace cavcool::oracle {

namespace {

SparseOp kron(const SparseOp& left, const SparseOp& right) {
  std::vector<Eigen::Triplet<cplx>> trip;
  const int rdim = static_cast<int>(right.rows());
  for (int i = 0; i < left.outerSize(); ++i)
    for (SparseOp::InnerIterator li(left, i); li; ++li)
      for (int j = 0; j < right.outerSize(); ++j)
        for (SparseOp::InnerIterator ri(right, j); ri; ++ri)
          trip.emplace_back(li.row() * rdim + ri.row(), li.col() * rdim + ri.col(), li.value() * ri.value());
  SparseOp out(left.rows() * right.rows(), left.cols() * right.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SparseOp annihilator(int n) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int k = 1; k < n; ++k) trip.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  SparseOp out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SparseOp eye(int n) {
  SparseOp out(n, n);
  out.setIdentity();
  return out;
}

void check_cutoffs(Cutoffs cutoffs) {
  if (cutoffs.c < 2 || cutoffs.a < 2) throw std::invalid_argument("fock oracle: cutoffs must be >= 2");
}

// Steps of equal length covering [t0, t1] with length <= max_dt.
int step_count(double t0, double t1, double max_dt) {
  return std::max(1, static_cast<int>(std::ceil((t1 - t0) / max_dt - 1e-9)));
}

double default_dt(const ModelParams& params) {
  double dt = 0.01 / params.nu;
  if (params.kappa > 0.0) dt = std::min(dt, 0.01 / params.kappa);
  return dt;
}

void check_times(std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("fock oracle: times must increase");
}

}  // namespace

LadderOps::LadderOps(Cutoffs cut) : cutoffs(cut) {
  check_cutoffs(cut);
  c = kron(annihilator(cut.c), eye(cut.a));
  a = kron(eye(cut.c), annihilator(cut.a));
  c_dag = c.adjoint();
  a_dag = a.adjoint();
  identity = eye(cut.c * cut.a);
}

double FockState::purity() const { return (rho * rho).trace().real(); }

std::array<double, 2> FockState::edge_population() const {
  std::array<double, 2> edge{0.0, 0.0};
  for (int nc = 0; nc < cutoffs.c; ++nc)
    for (int na = 0; na < cutoffs.a; ++na) {
      const int i = nc * cutoffs.a + na;
      const double p = rho(i, i).real();
      if (nc == cutoffs.c - 1) edge[0] += p;
      if (na == cutoffs.a - 1) edge[1] += p;
    }
  return edge;
}

void FockState::check_truncation(double limit) const {
  const auto edge = edge_population();
  if (edge[0] > limit || edge[1] > limit)
    throw TruncationBreach("fock oracle: edge population " + std::to_string(std::max(edge[0], edge[1])) +
                           " exceeds " + std::to_string(limit));
}

FockState number_state(int n_c, int n_a, Cutoffs cutoffs) {
  check_cutoffs(cutoffs);
  if (n_c < 0 || n_a < 0 || n_c >= cutoffs.c || n_a >= cutoffs.a)
    throw std::invalid_argument("number_state: level outside the cutoff");
  FockState s{cutoffs, Eigen::MatrixXcd::Zero(cutoffs.c * cutoffs.a, cutoffs.c * cutoffs.a)};
  const int i = n_c * cutoffs.a + n_a;
  s.rho(i, i) = 1.0;
  return s;
}

FockState vacuum(Cutoffs cutoffs) { return number_state(0, 0, cutoffs); }

FockState coherent(cplx beta_c, cplx beta_a, Cutoffs cutoffs) {
  check_cutoffs(cutoffs);
  auto amplitudes = [](cplx beta, int n) {
    Eigen::VectorXcd v(n);
    v(0) = 1.0;
    for (int k = 1; k < n; ++k) v(k) = v(k - 1) * beta / std::sqrt(static_cast<double>(k));
    return Eigen::VectorXcd(v / v.norm());
  };
  const Eigen::VectorXcd vc = amplitudes(beta_c, cutoffs.c);
  const Eigen::VectorXcd va = amplitudes(beta_a, cutoffs.a);
  Eigen::VectorXcd psi(cutoffs.c * cutoffs.a);
  for (int i = 0; i < cutoffs.c; ++i) psi.segment(i * cutoffs.a, cutoffs.a) = vc(i) * va;
  return {cutoffs, psi * psi.adjoint()};
}

SparseOp build_hamiltonian(const ModelParams& params, Dynamics mode, const LadderOps& ops) {
  const cplx i{0.0, 1.0};
  SparseOp h = params.nu * (ops.c_dag * ops.c) + params.nu_c * (ops.a_dag * ops.a);
  if (mode == Dynamics::NonRWA) {
    SparseOp x = ops.c + ops.c_dag;
    SparseOp p = ops.a_dag - ops.a;
    h += (i * params.g_eff) * SparseOp(x * p);
  } else {
    h += (i * params.g_eff) * SparseOp(ops.c * ops.a_dag - ops.a * ops.c_dag);
  }
  return h;
}

SparseOp build_transport_hamiltonian(const ModelParams& params, const PhaseProfile& profile, double t,
                                     double cooling_switch, const LadderOps& ops) {
  const cplx i{0.0, 1.0};
  const double phi = profile.phi(t);
  const double alpha = phi / profile.eta;
  const double g = cooling_switch * profile.g_bare * std::cos(phi);
  const double nu_c = profile.cavity_frequency(params, t);

  SparseOp x = ops.c + ops.c_dag;
  SparseOp p = ops.a_dag - ops.a;
  SparseOp h = params.nu * (ops.c_dag * ops.c) + nu_c * (ops.a_dag * ops.a);
  h -= (0.5 * params.nu * alpha) * x;
  h -= (i * g * alpha) * p;
  h += (i * g) * SparseOp(x * p);
  return h;
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const SparseOp& h, double kappa, const LadderOps& ops) {
  const cplx i{0.0, 1.0};
  const SparseOp na = ops.a_dag * ops.a;
  const SparseOp h_eff = h - (i * (0.5 * kappa)) * na;
  const SparseOp h_eff_dag = h_eff.adjoint();
  Eigen::MatrixXcd out = -i * (h_eff * rho) + i * (rho * h_eff_dag);
  if (kappa > 0.0) {
    const Eigen::MatrixXcd a_rho = ops.a * rho;
    out += kappa * (a_rho * ops.a_dag);
  }
  return out;
}

FockState lindblad_step(const FockState& state, const SparseOp& h, double kappa, double dt, const LadderOps& ops) {
  const Eigen::MatrixXcd& r = state.rho;
  const Eigen::MatrixXcd k1 = lindblad_rhs(r, h, kappa, ops);
  const Eigen::MatrixXcd k2 = lindblad_rhs(r + 0.5 * dt * k1, h, kappa, ops);
  const Eigen::MatrixXcd k3 = lindblad_rhs(r + 0.5 * dt * k2, h, kappa, ops);
  const Eigen::MatrixXcd k4 = lindblad_rhs(r + dt * k3, h, kappa, ops);
  FockState next{state.cutoffs, r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)};
  next.check_truncation();
  return next;
}

cplx expectation(const SparseOp& op, const Eigen::MatrixXcd& rho) {
  cplx sum{};
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOp::InnerIterator it(op, k); it; ++it) sum += it.value() * rho(it.col(), it.row());
  return sum;
}

MomentState extract_moments(const FockState& state, const LadderOps& ops) {
  const auto& r = state.rho;
  MomentState m;
  m.n_c = expectation(ops.c_dag * ops.c, r).real();
  m.n_a = expectation(ops.a_dag * ops.a, r).real();
  m.ca = expectation(ops.c * ops.a, r);
  m.ca_dag = expectation(ops.c * ops.a_dag, r);
  m.cc = expectation(ops.c * ops.c, r);
  m.aa = expectation(ops.a * ops.a, r);
  m.mean_c = expectation(ops.c, r);
  m.mean_a = expectation(ops.a, r);
  return m;
}

MomentVectorFull moment_vector_derivative(const FockState& state, const SparseOp& h, double kappa,
                                          const LadderOps& ops) {
  const Eigen::MatrixXcd d = lindblad_rhs(state.rho, h, kappa, ops);
  MomentVectorFull y{};
  y[kNc] = expectation(ops.c_dag * ops.c, d);
  y[kNa] = expectation(ops.a_dag * ops.a, d);
  y[kCa] = expectation(ops.c * ops.a, d);
  y[kCaDag] = expectation(ops.c * ops.a_dag, d);
  y[kCdagA] = expectation(ops.c_dag * ops.a, d);
  y[kCdagAdag] = expectation(ops.c_dag * ops.a_dag, d);
  y[kCc] = expectation(ops.c * ops.c, d);
  y[kAa] = expectation(ops.a * ops.a, d);
  y[kCdagCdag] = expectation(ops.c_dag * ops.c_dag, d);
  y[kAdagAdag] = expectation(ops.a_dag * ops.a_dag, d);
  return y;
}

double fourth_cumulant_x(const FockState& state, const LadderOps& ops) {
  const SparseOp x = (1.0 / std::sqrt(2.0)) * SparseOp(ops.c + ops.c_dag);
  const SparseOp x2 = x * x;
  const SparseOp x3 = x2 * x;
  const SparseOp x4 = x2 * x2;
  const double m1 = expectation(x, state.rho).real();
  const double m2 = expectation(x2, state.rho).real();
  const double m3 = expectation(x3, state.rho).real();
  const double m4 = expectation(x4, state.rho).real();
  return m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * std::pow(m1, 4);
}

std::vector<OracleSample> evolve(const FockState& initial, const ModelParams& params, Dynamics mode,
                                 std::span<const double> times, double max_dt) {
  params.validate();
  check_times(times);
  const LadderOps ops(initial.cutoffs);
  const SparseOp h = build_hamiltonian(params, mode, ops);
  const double dt_cap = max_dt > 0.0 ? max_dt : default_dt(params);

  std::vector<OracleSample> out;
  if (times.empty()) return out;
  FockState state = initial;
  out.push_back({times[0], extract_moments(state, ops), state});
  for (std::size_t k = 1; k < times.size(); ++k) {
    const int n = step_count(times[k - 1], times[k], dt_cap);
    const double dt = (times[k] - times[k - 1]) / n;
    for (int s = 0; s < n; ++s) state = lindblad_step(state, h, params.kappa, dt, ops);
    out.push_back({times[k], extract_moments(state, ops), state});
  }
  return out;
}

std::vector<OracleSample> evolve_time_dependent(const FockState& initial, const PhaseProfile& profile,
                                                const ModelParams& params, std::span<const double> times,
                                                double max_dt) {
  params.validate();
  check_times(times);
  const LadderOps ops(initial.cutoffs);
  const double dt_cap = max_dt > 0.0 ? max_dt : default_dt(params);

  std::vector<OracleSample> out;
  if (times.empty()) return out;

  // Merge the requested times with the switch-on time and the breakpoints so
  // that no RK4 step straddles a discontinuity.
  std::vector<double> grid(times.begin(), times.end());
  std::vector<double> extra = profile.breakpoints;
  extra.push_back(profile.cooling_on_time);
  for (double b : extra)
    if (b > times.front() && b < times.back()) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  FockState state = initial;
  std::size_t want = 0;
  auto emit = [&](double t) {
    if (want < times.size() && t == times[want]) {
      out.push_back({t, extract_moments(state, ops), state});
      ++want;
    }
  };
  emit(grid[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double a = grid[k - 1], b = grid[k];
    const double sw = a >= profile.cooling_on_time ? 1.0 : 0.0;
    const int n = step_count(a, b, dt_cap);
    const double dt = (b - a) / n;
    for (int s = 0; s < n; ++s) {
      const double t = a + s * dt;
      const SparseOp h0 = build_transport_hamiltonian(params, profile, t, sw, ops);
      const SparseOp hm = build_transport_hamiltonian(params, profile, t + 0.5 * dt, sw, ops);
      const SparseOp h1 = build_transport_hamiltonian(params, profile, t + dt, sw, ops);
      const Eigen::MatrixXcd& r = state.rho;
      const Eigen::MatrixXcd k1 = lindblad_rhs(r, h0, params.kappa, ops);
      const Eigen::MatrixXcd k2 = lindblad_rhs(r + 0.5 * dt * k1, hm, params.kappa, ops);
      const Eigen::MatrixXcd k3 = lindblad_rhs(r + 0.5 * dt * k2, hm, params.kappa, ops);
      const Eigen::MatrixXcd k4 = lindblad_rhs(r + dt * k3, h1, params.kappa, ops);
      state.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      state.check_truncation();
    }
    emit(b);
  }
  return out;
}

}  // namespace cavcool::oracle
