#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracles.hpp"
#include "gmhd/errors.hpp"
#include "gmhd/weighted_norms.hpp"

using namespace gmhd;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("psi weight") {
  CHECK(psi_weight(0.0, 2.0) == 0.5);
  CHECK(psi_weight(7.0, 0.0) == 0.0);
  CHECK(psi_weight(3.0, 4.0) == 0.5);
}

TEST_CASE("weighted norm of a Gaussian against quadrature") {
  Grid g(8, 800, 8.0);
  auto f = sample_field(g, [](double, double y) { return std::exp(-y * y); });
  const double num = weighted_norm(f, {0.0, 0, 1.0, 0.0});
  boost::math::quadrature::exp_sinh<double> es;
  const double q = es.integrate([](double y) { return std::exp(-2 * y * y + y * y / 4); });
  const double oracle = std::sqrt(2 * kPi * q);
  CHECK(num == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(num * num == doctest::Approx(2 * kPi * 0.5 * std::sqrt(4 * kPi / 7)).epsilon(1e-6));
  CHECK(weighted_norm(SpectralField(g), {1.0, 2, 1.0, 0.0}) == 0.0);
}

TEST_CASE("mode shift scales the s=1 norm by the symbol ratio") {
  Grid g(16, 64, 4.0);
  auto f0 = sample_field(g, [](double, double y) { return std::exp(-y); });
  auto f1 = sample_field(g, [](double x, double y) { return std::exp(Complex{0.0, x}) * std::exp(-y); });
  const double n0 = weighted_norm(f0, {1.0, 0, 1.0, 0.0});
  const double n1 = weighted_norm(f1, {1.0, 0, 1.0, 0.0});
  CHECK(n1 * n1 / (n0 * n0) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("monotonicity in s, k and gamma") {
  Grid g(32, 64, 5.0);
  std::mt19937_64 rng(1);
  auto f = oracle::random_field(g, rng, 10);
  double prev = 0.0;
  for (double s : {0.0, 0.5, 1.0, 7.0, 22.0 / 3.0, 8.0}) {
    const double n = weighted_norm(f, {s, 0, 1.0, 0.0});
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(weighted_norm(f, {1.0, 2, 1.0, 0.0}) >= weighted_norm(f, {1.0, 0, 1.0, 0.0}));
  CHECK(weighted_norm(f, {1.0, 0, 0.5, 0.0}) < weighted_norm(f, {1.0, 0, 1.0, 0.0}));
  CHECK_THROWS_AS(weighted_norm(f, {9.0, 0, 1.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(weighted_norm(f, {1.0, 5, 1.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(weighted_norm(f, {1.0, 0, 1.5, 0.0}), ParameterError);
  auto bad = f;
  bad(3, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(weighted_norm(bad, {1.0, 0, 1.0, 0.0}), NumericError);
}

TEST_CASE("gamma zero reduces to the unweighted norm and inner product matches") {
  Grid g(16, 64, 4.0);
  std::mt19937_64 rng(2);
  auto f = oracle::random_field(g, rng, 5);
  const double n = weighted_level_norm(f, 0.0, 0.0, 3.0);
  CHECK(n * n == doctest::Approx(l2_inner(f, f).real()).epsilon(1e-13));
  const double w = weighted_level_norm(f, 2.5, 0.7, 1.0);
  CHECK(w * w == doctest::Approx(weighted_inner(f, f, 2.5, 0.7, 1.0)).epsilon(1e-13));
}

TEST_CASE("weighted sup norm") {
  Grid g(16, 32, 4.0);
  CHECK(weighted_sup_norm(SpectralField(g), 1.0, 1.0, 0.0) == 0.0);
  auto f = sample_field(g, [](double x, double) { return std::cos(x); });
  // Slice H^1 norm: 2pi * 2 * (1/4) * 2 = 2pi.
  const double slice = std::sqrt(2 * kPi);
  CHECK(weighted_sup_norm(f, 1.0, 0.0, 0.0) == doctest::Approx(slice));
  CHECK(weighted_sup_norm(f, 1.0, 0.5, 2.0) ==
        doctest::Approx(slice * std::exp(0.5 * psi_weight(2.0, 4.0))));
}

TEST_CASE("tail bound check") {
  Grid g0(8, 128, 12.0);
  auto [l0, r0] = tail_sup_bound_check(SpectralField(g0), 0.6, 0.0);
  CHECK(l0 == 0.0);
  CHECK(r0 == 0.0);
  std::vector<double> ratios;
  for (int ny : {128, 256, 512}) {
    Grid g(8, ny, 12.0);
    auto f = sample_field(g, [](double, double y) { return std::exp(-y * y / 2); });
    auto [lhs, rhs] = tail_sup_bound_check(f, 0.6, 0.0);
    CHECK(std::isfinite(lhs / rhs));
    CHECK(lhs <= std::pow(kPi, 0.25) * rhs);
    ratios.push_back(lhs / rhs);
  }
  CHECK(std::abs(ratios[2] - ratios[0]) / ratios[0] < 0.1);
}

TEST_CASE("discrete Poincare terms on decaying profiles") {
  Grid g(16, 1024, 14.0);
  for (int m = 1; m <= 3; ++m)
    for (double c : {0.3, 0.7, 1.5}) {
      auto f = sample_field(g, [&](double x, double y) {
        return (1.0 + 0.5 * std::cos(x)) * std::pow(y, m) * std::exp(-c * y * y);
      });
      for (double t : {0.0, 2.0}) {
        const auto p = poincare_terms(f, t);
        CHECK(poincare_first_holds(p, t));
        for (double s : {0.25, 0.5, 0.75}) CHECK(poincare_second_holds(p, t, s));
      }
    }
  PoincareTerms p{0.6823, 2 * 0.5117, 0.0};
  CHECK(poincare_first_holds(p, 0.0));
  CHECK_THROWS_AS(poincare_second_holds(p, 0.0, 1.5), ParameterError);
}
