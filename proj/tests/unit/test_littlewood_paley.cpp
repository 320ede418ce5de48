#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dense_oracles.hpp"
#include "gmhd/littlewood_paley.hpp"

using namespace gmhd;

TEST_CASE("ladder supports and partition of unity") {
  for (int nx : {8, 16, 32, 64, 256}) {
    DyadicLadder L(nx);
    for (int r = 0; r <= nx / 2; ++r) {
      double s = 0.0;
      for (int k = -1; k <= L.k_max(); ++k) {
        const double w = L.block(k, r);
        CHECK(w >= 0.0);
        s += w;
        if (k >= 0 && w > 0.0) {
          const double scaled = std::ldexp(double(r), -k);
          CHECK(scaled > 0.75);
          CHECK(scaled < 8.0 / 3.0);
        }
      }
      CHECK(std::abs(s - 1.0) < 1e-15);
      if (r > 4.0 / 3.0) CHECK(L.chi(r) == 0.0);
      CHECK(L.block(-2, r) == 0.0);
      CHECK(L.low_pass(L.k_max() + 5, r) == doctest::Approx(1.0).epsilon(1e-15));
    }
    // Every block except possibly the last reaches some grid mode.
    CHECK(std::ldexp(double(nx / 2), -L.k_max()) > 0.75);
  }
  CHECK(DyadicLadder(64).k_max() == 5);
  CHECK(DyadicLadder::raw_bump(0.75) == 0.0);
  CHECK(DyadicLadder::raw_bump(8.0 / 3.0) == 0.0);
  CHECK(DyadicLadder::raw_bump(1.5) > 0.0);
}

TEST_CASE("lp_block and low_pass") {
  Grid g(32, 16, 3.0);
  std::mt19937_64 rng(2);
  auto f = oracle::random_field(g, rng, 15);
  SpectralField sum(g);
  const DyadicLadder L(32);
  for (int k = -1; k <= L.k_max(); ++k) sum += lp_block(f, k);
  CHECK(oracle::rel_diff(sum, f) < 1e-13);
  CHECK(lp_block(f, -2).max_abs() == 0.0);
  CHECK(lp_block(f, L.k_max() + 1).max_abs() == 0.0);
  CHECK(oracle::rel_diff(low_pass(f, 40), f) < 1e-15);

  auto c = sample_field(g, [](double, double y) { return 1.0 + y; });
  CHECK(oracle::rel_diff(lp_block(c, -1), c) == 0.0);
  for (int k = 0; k <= L.k_max(); ++k) {
    CHECK(lp_block(c, k).max_abs() == 0.0);
    CHECK(oracle::rel_diff(low_pass(c, k), c) == 0.0);
  }
  auto hi = sample_field(g, [](double x, double) { return std::cos(12.0 * x); });
  CHECK(low_pass(hi, 3).at_mode(0, 12) == Complex{});  // 12/8 > 4/3

  // S_k equals Delta_{-1} + sum_{0 <= j <= k-1} Delta_j.
  for (int k = 0; k <= L.k_max() + 1; ++k) {
    SpectralField s = lp_block(f, -1);
    for (int j = 0; j <= k - 1; ++j) s += lp_block(f, j);
    CHECK(oracle::rel_diff(low_pass(f, k), s) < 1e-14);
  }
}

TEST_CASE("paraproduct special cases") {
  Grid g(32, 16, 3.0);
  std::mt19937_64 rng(3);
  auto f = oracle::random_field(g, rng, 10);
  auto c = sample_field(g, [](double, double y) { return std::exp(-y); });
  CHECK(paraproduct(f, c).max_abs() == 0.0);
  CHECK(paraproduct(SpectralField(g), f).max_abs() == 0.0);
  CHECK(remainder(SpectralField(g), f).max_abs() == 0.0);

  // Constant a: T_a g = a (g - Delta_{-1} g - Delta_0 g) on retained modes.
  auto three = sample_field(g, [](double, double) { return 3.0; });
  auto expect = 3.0 * (f - lp_block(f, -1) - lp_block(f, 0));
  dealias(expect);
  CHECK(oracle::rel_diff(paraproduct(three, f), expect) < 1e-14);
}

TEST_CASE("Bony decomposition is exact") {
  Grid g(64, 32, 4.0);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = oracle::random_field(g, rng, 31);
    auto h = oracle::random_field(g, rng, 31);
    auto lhs = paraproduct(f, h) + paraproduct(h, f) + remainder(f, h);
    CHECK(oracle::rel_diff(lhs, multiply(f, h)) < 1e-12);
  }
  auto e1 = sample_field(g, [](double x, double) { return std::exp(Complex{0.0, x}); });
  auto e2 = sample_field(g, [](double x, double) { return std::exp(Complex{0.0, 2.0 * x}); });
  auto sum = paraproduct(e1, e1) + paraproduct(e1, e1) + remainder(e1, e1);
  CHECK(oracle::rel_diff(sum, e2) < 1e-13);
}

TEST_CASE("dense-matrix oracles") {
  for (int nx : {16, 32}) {
    Grid g(nx, 16, 3.0);
    std::mt19937_64 rng(nx);
    auto a = oracle::random_field(g, rng, nx / 2 - 1, 0.5);
    auto f = oracle::random_field(g, rng, nx / 2 - 1, 0.5);
    auto h = oracle::random_field(g, rng, nx / 2 - 1, 0.5);
    auto Ta = [&](int j) { return oracle::paraproduct(a, j); };

    CHECK(oracle::rel_diff(paraproduct(a, f), oracle::apply(Ta, f)) < 1e-12);
    CHECK(oracle::rel_diff(remainder(a, f),
                           oracle::apply([&](int j) { return oracle::remainder(a, j); }, f)) < 1e-12);
    CHECK(oracle::rel_diff(paraproduct_adjoint(a, f),
                           oracle::apply([&](int j) { return oracle::adjoint(Ta(j)); }, f)) < 1e-12);

    for (double s : {0.5, 1.6, 7.0}) {
      const auto D = oracle::bracket_power(g, s);
      auto dense = oracle::apply([&](int j) { return D * Ta(j) - Ta(j) * D; }, f);
      CHECK(oracle::rel_diff(commutator_ds_para(a, f, s), dense) < 1e-11);
    }
    CHECK(commutator_ds_para(a, f, 0.0).max_abs() < 1e-14);

    const double delta = 0.3;
    const auto E = oracle::gevrey(g, delta);
    const auto Dx = oracle::d_x(g);
    auto m0 = oracle::apply([&](int j) { return E * Ta(j) * Dx - Ta(j) * Dx * E; }, f);
    CHECK(oracle::rel_diff(multiplier_commutator(a, f, delta, 0), m0) < 1e-11);
    auto dxa = d_x_real(a);
    auto m1 = oracle::apply(
        [&](int j) {
          return E * Ta(j) * Dx - Ta(j) * Dx * E -
                 oracle::scaled(oracle::paraproduct(dxa, j) * oracle::q_op(g) * Dx * E, 2.0 / 3.0 * delta);
        },
        f);
    CHECK(oracle::rel_diff(multiplier_commutator(a, f, delta, 1), m1) < 1e-11);

    // Adjoint of a real constant is the masked diagonal T_a.
    auto two = sample_field(g, [](double, double) { return 2.0; });
    CHECK(oracle::rel_diff(paraproduct_adjoint(two, h), paraproduct(two, h)) < 1e-14);
  }
}

TEST_CASE("adjoint duality") {
  Grid g(64, 32, 4.0);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = oracle::random_field(g, rng, 31);
    auto f = oracle::random_field(g, rng, 31);
    auto h = oracle::random_field(g, rng, 31);
    const Complex lhs = l2_inner(paraproduct(a, f), h);
    const Complex rhs = l2_inner(f, paraproduct_adjoint(a, h));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
  CHECK(paraproduct_adjoint(SpectralField(g), SpectralField(g)).max_abs() == 0.0);
}

TEST_CASE("multiplier commutator with zero radius or constant coefficient") {
  Grid g(32, 16, 3.0);
  std::mt19937_64 rng(8);
  auto a = oracle::random_field(g, rng, 10);
  auto f = oracle::random_field(g, rng, 10);
  CHECK(multiplier_commutator(a, f, 0.0, 0).max_abs() < 1e-15);
  auto c = sample_field(g, [](double, double y) { return 1.0 + y; });
  CHECK(multiplier_commutator(c, f, 0.4, 0).max_abs() < 1e-13);
  CHECK(multiplier_commutator(c, f, 0.4, 1).max_abs() < 1e-13);
  CHECK(commutator_ds_para(c, f, 2.0).max_abs() < 1e-12);
}

TEST_CASE("lorentz pairing") {
  Grid g(32, 16, 3.0);
  std::mt19937_64 rng(9);
  auto a = oracle::random_field(g, rng, 10);
  auto f = oracle::random_field(g, rng, 10);
  auto h = oracle::random_field(g, rng, 10);
  CHECK(lorentz_pairing(SpectralField(g), f, h, 1.0, 2.0) == 0.0);
  const double sym = lorentz_pairing(a, f, f, 1.5, 1.5);
  const double reduced =
      2.0 * l2_inner(bracket_power(paraproduct(a, d_x(f)), 1.5), bracket_power(f, 1.5)).real();
  CHECK(sym == doctest::Approx(reduced).epsilon(1e-13));
  CHECK_THROWS(lorentz_pairing(a, f, h, 0.0, 1.0));
}
