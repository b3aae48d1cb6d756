#pragma once

// Brute-force verifier: Lindblad evolution of a truncated two-mode density
// matrix. Cost grows as cutoff⁴, so this is meant for small instances in tests
// and verification tooling, not for production runs.

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "cavcool/accelerated_lattice.hpp"
#include "cavcool/core_model.hpp"
#include "cavcool/moment_dynamics.hpp"

namespace cavcool::oracle {

using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct Cutoffs {
  int c = 12;  // Fock levels kept for the motional mode (0 .. c-1)
  int a = 12;  // Fock levels kept for the cavity mode
};

/// Ladder operators on the product basis |n_c, n_a>, index n_c * cutoff_a + n_a.
struct LadderOps {
  explicit LadderOps(Cutoffs cutoffs);
  Cutoffs cutoffs;
  SparseOp c, c_dag, a, a_dag, identity;
  int dimension() const { return cutoffs.c * cutoffs.a; }
};

struct FockState {
  Cutoffs cutoffs;
  Eigen::MatrixXcd rho;

  int dimension() const { return cutoffs.c * cutoffs.a; }
  double trace() const { return rho.trace().real(); }
  double purity() const;
  /// Populations of the highest kept level of each mode.
  std::array<double, 2> edge_population() const;
  /// Throws TruncationBreach when an edge population exceeds `limit`.
  void check_truncation(double limit = 1e-6) const;
};

FockState vacuum(Cutoffs cutoffs);
FockState number_state(int n_c, int n_a, Cutoffs cutoffs);
/// Truncated (renormalised) product coherent state.
FockState coherent(cplx beta_c, cplx beta_a, Cutoffs cutoffs);

/// nu c†c + nu_c a†a + i g (c + c†)(a† - a), or the RWA coupling i g (c a† - a c†).
SparseOp build_hamiltonian(const ModelParams& params, Dynamics mode, const LadderOps& ops);

/// Moving-lattice Hamiltonian at time t with an explicit cooling switch
/// (constant energy offset dropped).
SparseOp build_transport_hamiltonian(const ModelParams& params, const PhaseProfile& profile, double t,
                                     double cooling_switch, const LadderOps& ops);

/// rho' = -i[H, rho] + kappa (a rho a† - {a†a, rho}/2).
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const SparseOp& h, double kappa, const LadderOps& ops);

/// One fixed RK4 step of the master equation. Checks the truncation guard.
FockState lindblad_step(const FockState& state, const SparseOp& h, double kappa, double dt, const LadderOps& ops);

/// <O> = tr(O rho).
cplx expectation(const SparseOp& op, const Eigen::MatrixXcd& rho);

MomentState extract_moments(const FockState& state, const LadderOps& ops);

/// tr(O L(rho)) for all ten second moments, each computed from its own
/// operator (conjugate pairs are not inferred).
MomentVectorFull moment_vector_derivative(const FockState& state, const SparseOp& h, double kappa,
                                          const LadderOps& ops);

/// Fourth cumulant of the c quadrature x = (c + c†)/√2, zero for Gaussian states.
double fourth_cumulant_x(const FockState& state, const LadderOps& ops);

struct OracleSample {
  double t = 0.0;
  MomentState moments;
  FockState state;
};

/// Fixed step dt = min(0.01/nu, 0.01/kappa) by default, adjusted so every
/// requested time is hit exactly.
std::vector<OracleSample> evolve(const FockState& initial, const ModelParams& params, Dynamics mode,
                                 std::span<const double> times, double max_dt = 0.0);

/// Same for the moving-lattice Hamiltonian; splits at the switch-on time and
/// the profile breakpoints.
std::vector<OracleSample> evolve_time_dependent(const FockState& initial, const PhaseProfile& profile,
                                                const ModelParams& params, std::span<const double> times,
                                                double max_dt = 0.0);

}  // namespace cavcool::oracle
