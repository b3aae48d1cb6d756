#include <doctest.h>

#include <random>

#include "cavcool/core_model.hpp"
#include "cavcool/moment_dynamics.hpp"
#include "test_support.hpp"

using namespace cavcool;
using doctest::Approx;

TEST_CASE("coherent_initial_state moment identities") {
  const auto vac = coherent_initial_state(0.0, 0.0);
  CHECK(vac == MomentState{});

  const auto s = coherent_initial_state(2.0, 0.0);
  CHECK(s.n_c == 4.0);
  CHECK(s.cc == cplx(4.0, 0.0));
  CHECK(s.n_a == 0.0);
  CHECK(s.ca == cplx{});
  CHECK(s.ca_dag == cplx{});
  CHECK(s.aa == cplx{});

  const auto t = coherent_initial_state({1.0, 1.0}, 0.5);
  CHECK(t.n_c == Approx(2.0));
  CHECK(std::abs(t.cc - cplx(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(t.ca - cplx(0.5, 0.5)) < 1e-15);
  CHECK(std::abs(t.ca_dag - cplx(0.5, 0.5)) < 1e-15);
}

TEST_CASE("atom and cavity energies") {
  ModelParams p;
  CHECK(atom_energy(vacuum_state(), p) == 0.0);
  CHECK(atom_energy(coherent_initial_state(2.0, 0.0), {1.0, 1.0, 0.0, 0.0}) == Approx(4.0));
  CHECK(atom_energy(coherent_initial_state(1.0, 0.0), {2.0, 1.0, 0.0, 0.0}) == Approx(2.0));
  CHECK(cavity_energy(vacuum_state(), p) == 0.0);
  CHECK(cavity_energy(coherent_initial_state(0.0, 1.0), {1.0, 2.0, 0.0, 0.0}) == Approx(2.0));
  CHECK(cavity_energy(coherent_initial_state(0.0, 0.5), {1.0, 1.0, 0.0, 0.0}) == Approx(0.25));

  const auto rec = energy_record(3.0, coherent_initial_state(1.0, 1.0), {2.0, 3.0, 0.0, 0.0});
  CHECK(rec.t == 3.0);
  CHECK(rec.e_atom == Approx(2.0));
  CHECK(rec.e_cavity == Approx(3.0));
}

TEST_CASE("ModelParams validation") {
  CHECK_NOTHROW(ModelParams{1.0, 1.0, 0.1, 1.0}.validate());
  CHECK_THROWS_AS(ModelParams({0.0, 1.0, 0.1, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams({1.0, 1.0, -0.1, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams({1.0, 1.0, 0.1, -1.0}).validate(), std::invalid_argument);
}

TEST_CASE("coherent states are pure Gaussian states") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const auto s = coherent_initial_state({n(rng), n(rng)}, {n(rng), n(rng)});
    const auto nu = symplectic_eigenvalues(s);
    CHECK(std::abs(nu[0] - 0.5) < 1e-12);
    CHECK(std::abs(nu[1] - 0.5) < 1e-12);
    CHECK(is_physical(s));
  }
}

TEST_CASE("covariance round trip and physicality of random Gaussian states") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto s = testing::random_gaussian_state(rng);
    const auto back = from_covariance(covariance_matrix(s), s.mean_c, s.mean_a);
    CHECK(testing::max_abs_diff(s, back) < 1e-12);
    CHECK(is_physical(s, 1e-9));
  }
}

TEST_CASE("unphysical states are rejected") {
  MomentState s;
  s.n_c = -0.1;
  CHECK_FALSE(is_physical(s));

  MomentState squeezed_too_much;
  squeezed_too_much.cc = 1.0;  // |<c²>| > n + 1/2 violates the uncertainty relation
  CHECK_FALSE(is_physical(squeezed_too_much));

  MomentState mean_exceeds;
  mean_exceeds.mean_c = 1.0;
  mean_exceeds.n_c = 0.5;
  CHECK_FALSE(is_physical(mean_exceeds));
}

TEST_CASE("full vector expansion satisfies the conjugate pairs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto s = testing::random_gaussian_state(rng);
    const auto y = to_full(s);
    CHECK(y[kCdagA] == std::conj(y[kCaDag]));
    CHECK(y[kCdagAdag] == std::conj(y[kCa]));
    CHECK(y[kCdagCdag] == std::conj(y[kCc]));
    CHECK(y[kAdagAdag] == std::conj(y[kAa]));
    CHECK(y[kNc].imag() == 0.0);
    CHECK(from_full(y, s.mean_c, s.mean_a) == s);
  }
}
