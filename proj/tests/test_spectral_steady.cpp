#include <doctest.h>

#include <cmath>
#include <random>

#include "cavcool/errors.hpp"
#include "cavcool/moment_dynamics.hpp"
#include "cavcool/spectral_steady.hpp"
#include "test_support.hpp"

using namespace cavcool;
using doctest::Approx;

namespace {

// Closed form, written out independently of the library.
double tfin(double nu, double nuc, double g, double k) {
  return g * g / (2 * nu) + (k * k + 4 * (nu - nuc) * (nu - nuc)) / (16 * nuc) +
         8 * std::pow(g, 4) * nuc / (nu * (k * k * nu + 4 * nuc * (nu * nuc - 4 * g * g)));
}

}  // namespace

TEST_CASE("steady_state_energy examples") {
  CHECK(steady_state_energy({1.0, 1.0, 0.0, 1.0}) == Approx(0.0625).epsilon(1e-14));
  CHECK(steady_state_energy({1.0, 1.0, 0.1, 1.0}) == Approx(0.005 + 0.0625 + 8e-4 / 4.84).epsilon(1e-14));
  CHECK(std::abs(steady_state_energy({1.0, 1.0, 0.1, 1.0}) - 0.067665) < 1e-6);
  const double side = steady_state_energy({1.0, 1.0, 0.01, 0.01});
  CHECK(side == Approx(5.63e-5).epsilon(0.01));
  CHECK(std::abs(side - 5e-5) <= 0.15 * 5e-5);
}

TEST_CASE("steady_state_energy failure modes") {
  CHECK_THROWS_AS(steady_state_energy({1.0, 0.0, 0.1, 1.0}), DegenerateDenominator);
  // kappa² nu + 4 nu_c (nu nu_c - 4 g²) = 0 at g² = 5/16.
  CHECK_THROWS_AS(steady_state_energy({1.0, 1.0, std::sqrt(5.0) / 4.0, 1.0}), DegenerateDenominator);
  CHECK_THROWS_AS(steady_state_energy({1.0, 1.0, 0.7, 1.0}), UnstableSystem);
  CHECK_THROWS_AS(steady_state_energy({1.0, -1.0, 0.1, 1.0}), UnstableSystem);
  CHECK_THROWS_AS(cooling_time({1.0, 1.0, 0.7, 1.0}, Dynamics::RWA), UnstableSystem);
}

TEST_CASE("numeric steady state agrees with the closed form") {
  CHECK(numeric_steady_state({1.0, 1.0, 0.0, 1.0}) == MomentState{});
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const ModelParams p{0.5 + u(rng), 0.5 + u(rng), 0.2 * u(rng), 0.05 + 2.0 * u(rng)};
    try {
      certify_stable(p);
    } catch (const UnstableSystem&) {
      continue;
    }
    const auto ss = numeric_steady_state(p);
    CHECK(p.nu * ss.n_c == Approx(steady_state_energy(p)).epsilon(1e-9));
    CHECK(steady_state_energy(p) == Approx(tfin(p.nu, p.nu_c, p.g_eff, p.kappa)).epsilon(1e-12));
    CHECK(ss.mean_c == cplx{});
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("long-time integration reaches the numeric fixed point") {
  for (const ModelParams& p : {ModelParams{1.0, 1.0, 0.1, 1.0}, ModelParams{2.0, 1.5, 0.125, 0.7}}) {
    const double tau = cooling_time(p, Dynamics::NonRWA);
    const auto traj = integrate(p, vacuum_state(), 0.0, 50.0 * tau, 50.0 * tau / 20.0, {}, Dynamics::NonRWA);
    CHECK(testing::max_abs_diff(traj.back().state, numeric_steady_state(p)) < 1e-6);
  }
}

TEST_CASE("spectral decomposition reconstructs E_atom") {
  SUBCASE("decoupled atom") {
    MomentState y0;
    y0.n_a = 0.8;
    const auto sd = spectral_decomposition({1.0, 1.0, 0.0, 1.0}, y0, Dynamics::NonRWA);
    for (const auto& c : sd.coeffs) CHECK(std::abs(c) < 1e-12);
    CHECK(sd.e0 == Approx(0.0).epsilon(1e-12));
    CHECK(sd.energy_at(7.0) == Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("RWA resonant") {
    const ModelParams p{1.0, 1.0, 0.1, 1.0};
    const auto y0 = coherent_initial_state(1.0, 0.0);
    const auto sd = spectral_decomposition(p, y0, Dynamics::RWA);
    cplx sum = sd.e0;
    for (const auto& c : sd.coeffs) sum += c;
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(sd.slowest_rate() == Approx(0.04174).epsilon(1e-3));
    const std::vector<double> ts{0.0, 5.0, 20.0, 50.0};
    const auto traj = integrate(p, y0, ts, {}, Dynamics::RWA);
    for (const auto& pt : traj) {
      CHECK(std::abs(sd.energy_at(pt.t) - atom_energy(pt.state, p)) < 1e-6);
      CHECK(sd.imag_residual_at(pt.t) <= 1e-9);
    }
  }
  SUBCASE("non-RWA, detuned") {
    const ModelParams p{1.0, 1.3, 0.15, 0.6};
    const auto y0 = coherent_initial_state({0.4, -0.3}, 0.2);
    const auto sd = spectral_decomposition(p, y0, Dynamics::NonRWA);
    CHECK(sd.e0 == Approx(steady_state_energy(p)).epsilon(1e-9));
    CHECK(sd.energy_at(0.0) == Approx(atom_energy(y0, p)).epsilon(1e-9));
    for (const auto& l : sd.lambdas) CHECK(l.real() < 0.0);
    const std::vector<double> ts{0.0, 3.0, 11.0, 40.0};
    const auto traj = integrate(p, y0, ts, {}, Dynamics::NonRWA);
    for (const auto& pt : traj) {
      CHECK(std::abs(sd.energy_at(pt.t) - atom_energy(pt.state, p)) < 1e-6);
      CHECK(sd.imag_residual_at(pt.t) <= 1e-9);
    }
  }
}

TEST_CASE("cooling times") {
  CHECK(cooling_time({1.0, 1.0, 0.1, 1.0}, Dynamics::RWA) == Approx(23.96).epsilon(1e-3));
  CHECK(cooling_time({1.0, 1.0, 0.1, 0.1}, Dynamics::RWA) == Approx(20.0).epsilon(0.1));
  CHECK(cooling_time({1.0, 1.0, 0.1, 0.1}, Dynamics::NonRWA) == Approx(20.0).epsilon(0.1));
  // Doppler limit kappa / 4g² holds on resonance.
  CHECK(cooling_time({0.5, 0.5, 0.02, 10.0}, Dynamics::RWA) == Approx(10.0 / (4 * 0.02 * 0.02)).epsilon(0.05));
}

TEST_CASE("limit estimates") {
  const auto d = limit_estimates({0.5, 5.0, 0.1, 10.0});
  CHECK(d.doppler_tau == Approx(250.0));
  CHECK(d.doppler_temp == Approx(2.5));
  CHECK(d.regime == "doppler");
  const auto s = limit_estimates({1.0, 1.0, 0.1, 0.1});
  CHECK(s.sideband_tau == Approx(20.0));
  CHECK(s.sideband_temp == Approx(0.005));
  CHECK(s.regime == "sideband");
  CHECK(limit_estimates({1.0, 1.0, 0.1, 10.0}).regime == "doppler");
  CHECK(limit_estimates({1.0, 1.0, 0.1, 1.0}).regime == "intermediate");
}

TEST_CASE("ground-state limit") {
  double prev = 1e300;
  for (double eps = 0.1; eps > 1e-4; eps *= 0.7) {
    const double e = steady_state_energy({1.0, 1.0, eps, eps});
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("cooling time bounds the decay envelope") {
  std::mt19937_64 rng(77);
  const ModelParams p{1.0, 1.1, 0.12, 0.8};
  for (int i = 0; i < 5; ++i) {
    const auto y0 = testing::random_gaussian_state(rng);
    const auto sd = spectral_decomposition(p, y0, Dynamics::NonRWA);
    const double tau = cooling_time(p, Dynamics::NonRWA);
    double bound = 0.0;
    for (const auto& c : sd.coeffs) bound += std::abs(c);
    for (double t = 5.0 * tau; t <= 10.0 * tau; t += tau / 4.0)
      CHECK(std::abs(sd.energy_at(t) - sd.e0) <= std::exp(-t / tau) * bound * (1.0 + 1e-9));
  }
}

TEST_CASE("RWA fixed point is exactly the vacuum") {
  const ModelParams p{1.0, 1.2, 0.1, 0.5};
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(rwa_matrix(p));
  CHECK(lu.rank() == 4);
  const auto sys = second_moment_system(p, Dynamics::RWA);
  CHECK(sys.source.norm() == 0.0);
  Eigen::FullPivLU<Matrix10cd> lu10(sys.linear);
  CHECK(lu10.rank() == 10);
  const auto sd = spectral_decomposition(p, coherent_initial_state(1.0, 0.0), Dynamics::RWA);
  CHECK(sd.e0 == 0.0);
}

TEST_CASE("decay fit on synthetic data") {
  std::vector<double> t, e;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(0.05 * i);
    e.push_back(0.3 + 2.0 * std::exp(-0.07 * t.back()) * (1.0 + 0.5 * std::cos(1.3 * t.back())));
  }
  const auto plain = fit_decay_rate(t, e, 0.3, 10.0, 80.0);
  CHECK(plain.ok);
  CHECK(plain.rate == Approx(0.07).epsilon(0.1));
  const auto env = fit_decay_rate(t, e, 0.3, 10.0, 80.0, 2.0 * 3.14159265358979 / 1.3);
  CHECK(env.ok);
  CHECK(env.rate == Approx(0.07).epsilon(1e-3));
  CHECK_FALSE(fit_decay_rate(t, e, 0.3, 200.0, 300.0).ok);
}
