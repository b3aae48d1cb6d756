#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cavcool/accelerated_lattice.hpp"
#include "cavcool/moment_dynamics.hpp"
#include "test_support.hpp"

using namespace cavcool;
using doctest::Approx;

namespace {

PhaseProfile constant_phase(double phi, double eta, double g) {
  PhaseProfile p;
  p.phi = [phi](double) { return phi; };
  p.phi_dot = [](double) { return 0.0; };
  p.eta = eta;
  p.g_bare = g;
  p.cooling_on_time = 0.0;
  return p;
}

MomentState central(const MomentState& s) {
  MomentState c = s;
  c.n_c -= std::norm(s.mean_c);
  c.n_a -= std::norm(s.mean_a);
  c.ca -= s.mean_c * s.mean_a;
  c.ca_dag -= s.mean_c * std::conj(s.mean_a);
  c.cc -= s.mean_c * s.mean_c;
  c.aa -= s.mean_a * s.mean_a;
  c.mean_c = c.mean_a = 0.0;
  return c;
}

}  // namespace

TEST_CASE("accel_rhs reduces to the static equations") {
  std::mt19937_64 rng(5);
  const ModelParams params{1.0, 1.2, 0.0, 0.8};
  const auto profile = constant_phase(0.0, 0.12, 0.15);
  ModelParams stat = params;
  stat.g_eff = 0.15;
  for (int i = 0; i < 100; ++i) {
    const auto s = testing::random_gaussian_state(rng);
    const auto d = accel_rhs(params, profile, 3.0, s);
    CHECK(testing::max_abs_diff(d, moment_derivative(stat, s, Dynamics::NonRWA)) <= 1e-14);
  }
}

TEST_CASE("displaced oscillator without coupling") {
  const ModelParams params{1.0, 1.0, 0.0, 1.0};
  const double alpha = 3.0;
  const auto profile = constant_phase(alpha * 0.1, 0.1, 0.0);
  const auto y0 = coherent_initial_state({0.4, 0.2}, 0.0);
  const auto ts = sample_times(0.0, 30.0, 0.5);
  const auto traj = integrate_transport(params, profile, y0, ts, {});
  const double r0 = std::abs(y0.mean_c - 0.5 * alpha);
  for (const auto& s : traj) CHECK(std::abs(std::abs(s.moments.mean_c - 0.5 * alpha) - r0) <= 1e-9);
}

TEST_CASE("transport energy") {
  const ModelParams p{1.0, 1.0, 0.1, 1.0};
  const auto still = constant_phase(0.0, 0.1, 0.1);
  CHECK(transport_energy(coherent_initial_state(1.0, 0.0), p, still, 0.0) == Approx(1.0));

  // Ground state displaced to equilibrium: nu² alpha²/4 (1 - 1/nu).
  const ModelParams p2{2.0, 1.0, 0.1, 1.0};
  const double alpha = 3.0;
  const auto held = constant_phase(alpha * 0.1, 0.1, 0.1);
  const auto ground = coherent_initial_state(0.5 * alpha, 0.0);
  CHECK(transport_energy(ground, p2, held, 0.0) == Approx(4.5).epsilon(1e-13));
  CHECK(comoving_energy(ground, p2, held, 0.0) == Approx(0.0).epsilon(1e-13));

  // With nu = 1 and alpha' = 0 both readings coincide.
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto s = testing::random_gaussian_state(rng);
    CHECK(transport_energy(s, p, held, 0.0) == Approx(comoving_energy(s, p, held, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("transport profiles") {
  for (auto shape : {RampShape::RaisedCosine, RampShape::MinimumJerk}) {
    const auto zero = make_transport_profile(0.0, 10.0, shape, 0.1, 0.0);
    for (double t = -1.0; t < 12.0; t += 0.37) CHECK(zero.phi(t) == 0.0);

    const double d = 2.5, T = 8.0;
    const auto p = make_transport_profile(d, T, shape, 0.1, 0.0);
    CHECK(p.phi(0.0) == 0.0);
    CHECK(p.phi(T) == Approx(d));
    CHECK(p.phi_dot(0.0) == 0.0);
    CHECK(p.phi_dot(T) == 0.0);
    CHECK(p.phi_dot(1e-9) == Approx(0.0).epsilon(1e-6));
    CHECK(profile_consistency_error(p, -1.0, T + 1.0) <= 1e-6);
  }
  const auto rc = make_transport_profile(2.5, 8.0, RampShape::RaisedCosine, 0.1, 0.0);
  CHECK(rc.phi_dot(4.0) == Approx(2.0 * 2.5 / 8.0));
  CHECK_THROWS_AS(make_transport_profile(1.0, 0.0, RampShape::RaisedCosine, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("slower ramps leave less excitation") {
  const ModelParams params{1.0, 1.0, 0.0, 1.0};
  const double eta = 0.12;
  for (auto shape : {RampShape::RaisedCosine, RampShape::MinimumJerk}) {
    std::vector<double> residual;
    for (double T : {10.0, 30.0, 100.0}) {
      const auto profile = make_transport_profile(1.0, T, shape, eta, 1e9);
      const std::vector<double> ts{0.0, T};
      const auto end = integrate_transport(params, profile, vacuum_state(), ts, {}).back();
      // Coherent residual about the final well; the central part stays the vacuum.
      residual.push_back(std::norm(end.moments.mean_c - 0.5 * profile.lattice_alpha(T)));
      CHECK(central(end.moments).n_c == Approx(0.0).epsilon(1e-9));
    }
    CHECK(residual[1] < residual[0]);
    CHECK(residual[2] < residual[1]);
    CHECK(residual[2] * 10.0 <= residual[0]);
  }
}

TEST_CASE("mean position follows the moving well") {
  const ModelParams params{1.0, 1.0, 0.1, 1.0};
  const auto profile = make_transport_profile(2.0 * std::numbers::pi, 100.0, RampShape::RaisedCosine, 0.12, 0.0, 0.1);
  const auto ts = sample_times(0.0, 120.0, 0.5);
  double worst = 0.0;
  for (const auto& s : integrate_transport(params, profile, vacuum_state(), ts, {}))
    worst = std::max(worst, std::abs(s.x_mean - profile.phi(s.t)));
  CHECK(worst <= 0.1 * 2.0 * std::numbers::pi);
}

TEST_CASE("central moments do not depend on the displacement sign") {
  const ModelParams params{1.0, 1.0, 0.0, 1.0};
  auto plus = make_transport_profile(1.3, 12.0, RampShape::RaisedCosine, 0.12, 4.0, 0.1);
  auto minus = make_transport_profile(-1.3, 12.0, RampShape::RaisedCosine, 0.12, 4.0, 0.1);
  plus.cavity_shift = minus.cavity_shift = 0.05;
  // cos(phi) and cos²(phi) agree, so coupling schedule and cavity frequency coincide.
  const auto y0 = coherent_initial_state(0.3, 0.1);
  const auto ts = sample_times(0.0, 30.0, 0.5);
  // Tight tolerances: central moments come from subtracting |mean|² ~ 30.
  IntegratorSettings tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-14;
  const auto a = integrate_transport(params, plus, y0, ts, tight);
  const auto b = integrate_transport(params, minus, y0, ts, tight);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, testing::max_abs_diff(central(a[i].moments), central(b[i].moments)));
  CHECK(worst <= 1e-9);
  CHECK(std::abs(a.back().moments.mean_c - b.back().moments.mean_c) > 1.0);
}

TEST_CASE("integrate_transport sampling") {
  const ModelParams params{1.0, 1.0, 0.1, 1.0};
  const auto profile = make_transport_profile(0.5, 5.0, RampShape::MinimumJerk, 0.12, 2.5, 0.1);
  const std::vector<double> ts{0.0, 1.0, 2.5, 3.0, 5.0, 7.5};
  const auto traj = integrate_transport(params, profile, vacuum_state(), ts, {});
  REQUIRE(traj.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(traj[i].t == ts[i]);
  const std::vector<double> bad{0.0, 0.0};
  CHECK_THROWS_AS(integrate_transport(params, profile, vacuum_state(), bad, {}), std::invalid_argument);
}
