#include <doctest.h>

#include <random>

#include "cavcool/errors.hpp"
#include "cavcool/physical_mapping.hpp"

using namespace cavcool;
using doctest::Approx;

namespace {

RingCavityConfig ring(double g = 2.0, double beta = 1.0) {
  RingCavityConfig c;
  c.g = g;
  c.delta = -50.0;
  c.delta_c = 0.5;
  c.kappa = 2.0;
  c.k = 1.0;
  c.m = 4.0;
  c.beta_in = beta;
  return c;
}

}  // namespace

TEST_CASE("steady cavity amplitude") {
  RingCavityConfig c = ring();
  c.delta_c = 0.0;
  c.kappa = 2.0;
  c.beta_in = 1.0;
  CHECK(std::abs(steady_cavity_amplitude(c) - cplx(2.0, 0.0)) < 1e-14);
  c.delta_c = 1.0;
  CHECK(std::abs(steady_cavity_amplitude(c) - cplx(1.0, 1.0)) < 1e-14);
  c.beta_in = 0.0;
  CHECK(steady_cavity_amplitude(c) == cplx{});

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    c.delta_c = u(rng);
    c.kappa = std::abs(u(rng)) + 0.1;
    c.beta_in = {u(rng), u(rng)};
    const double expected = 2.0 * c.kappa * std::norm(c.beta_in) / (c.delta_c * c.delta_c + c.kappa * c.kappa / 4.0);
    CHECK(std::norm(steady_cavity_amplitude(c)) == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("ring mapping identities") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  for (int i = 0; i < 100; ++i) {
    RingCavityConfig c = ring(u(rng), u(rng));
    c.delta = (i % 2 ? 1.0 : -1.0) * 10.0 * u(rng);
    c.m = u(rng);
    c.k = u(rng);
    const auto mm = ring_model_params(c);
    CHECK(mm.params.nu == Approx(c.k * std::sqrt(2.0 * mm.lattice.v0 / c.m)).epsilon(1e-12));
    CHECK(mm.lattice.eta * mm.lattice.eta * 2.0 * c.m * mm.params.nu == Approx(c.k * c.k).epsilon(1e-12));
    CHECK(mm.params.nu_c == Approx(-c.delta_c + 2.0 * c.g * c.g / c.delta).epsilon(1e-12));
    CHECK(mm.params.g_eff == Approx(mm.params.nu / (2.0 * mm.lattice.alpha * mm.lattice.eta)).epsilon(1e-12));
  }
}

TEST_CASE("ring mapping scales with the drive") {
  const auto one = ring_model_params(ring(2.0, 1.0));
  const auto two = ring_model_params(ring(2.0, 2.0));
  CHECK(two.lattice.alpha == Approx(2.0 * one.lattice.alpha));
  CHECK(two.params.nu == Approx(2.0 * one.params.nu));
  CHECK(two.lattice.v0 == Approx(4.0 * one.lattice.v0));
  CHECK(two.lattice.eta == Approx(one.lattice.eta / std::sqrt(2.0)));
}

TEST_CASE("ring mapping rejects a missing trap") {
  CHECK_THROWS_AS(ring_model_params(ring(0.0)), InvalidRegime);
  CHECK_THROWS_AS(ring_model_params(ring(2.0, 0.0)), InvalidRegime);
  RingCavityConfig c = ring();
  c.delta = 0.0;
  CHECK_THROWS_AS(ring_model_params(c), InvalidRegime);
}

TEST_CASE("standing-wave mapping") {
  StandingWaveConfig c;
  c.g = 0.3;
  c.delta = 200.0;
  c.delta_c = -1.0;
  c.kappa = 1.0;
  c.k = 0.12 * std::sqrt(2.0);  // m = 1, nu = 1 gives eta = 0.12
  c.k_c = c.k;
  c.m = 1.0;
  // nu = Omega² eta² / delta = 1 requires Omega² = delta / eta².
  c.omega = std::sqrt(c.delta) / 0.12;
  const auto mm = standing_model_params(c);
  CHECK(mm.params.nu == Approx(1.0).epsilon(1e-12));
  CHECK(mm.lattice.eta == Approx(0.12).epsilon(1e-12));
  CHECK(std::abs(mm.params.g_eff - c.g * c.omega * mm.lattice.eta / (2.0 * c.delta)) < 1e-12);
  CHECK(mm.params.g_eff / mm.params.nu == Approx(c.g / (2.0 * c.omega * mm.lattice.eta)).epsilon(1e-12));
  CHECK(mm.params.nu_c == Approx(1.0 + c.g * c.g / c.delta));
  CHECK(mm.params.nu == Approx(c.k * std::sqrt(2.0 * mm.lattice.v0 / c.m)).epsilon(1e-12));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  for (int i = 0; i < 50; ++i) {
    StandingWaveConfig r = c;
    r.g = u(rng);
    r.omega = 10.0 * u(rng);
    r.delta = 50.0 * u(rng);
    r.k = u(rng);
    r.m = u(rng);
    const auto m = standing_model_params(r);
    CHECK(m.params.g_eff / m.params.nu == Approx(r.g / (2.0 * r.omega * m.lattice.eta)).epsilon(1e-12));
    CHECK(m.params.nu == Approx(r.omega * r.omega * m.lattice.eta * m.lattice.eta / r.delta).epsilon(1e-12));
  }

  StandingWaveConfig dark = c;
  dark.omega = 0.0;
  CHECK_THROWS_AS(standing_model_params(dark), InvalidRegime);
  StandingWaveConfig red = c;
  red.delta = -200.0;
  CHECK_THROWS_AS(standing_model_params(red), InvalidRegime);
}

TEST_CASE("n-qubit centre-of-mass mapping") {
  const ModelParams p{1.0, 1.0, 0.1, 1.0};
  CHECK(n_qubit_params(p, 0.05, 1) == p);
  CHECK(n_qubit_params(p, 0.0, 4).g_eff == Approx(0.2));
  CHECK(n_qubit_params(p, 0.05, 2).nu_c == Approx(1.05));
  CHECK(n_qubit_params(p, 0.05, 2).nu == p.nu);
  CHECK(n_qubit_params(p, 0.05, 2).kappa == p.kappa);
  CHECK_THROWS_AS(n_qubit_params(p, 0.0, 0), std::invalid_argument);
}
