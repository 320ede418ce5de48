#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "gmhd/errors.hpp"
#include "gmhd/gevrey_clock.hpp"

using namespace gmhd;

namespace {

ClockParams params(double eps, double lambda, double delta0, double alpha) {
  ClockParams p;
  p.epsilon = eps;
  p.lambda = lambda;
  p.delta0 = delta0;
  p.alpha = alpha;
  return p;
}

}  // namespace

TEST_CASE("theta closed form values") {
  GevreyClock c(params(0.01, 10.0, 0.5, 2.0));
  CHECK(c.theta_at(0.0) == 0.0);
  CHECK(c.theta_at(1.0) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(c.theta_limit() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(c.theta_at(1e9) == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(c.theta() == 0.0);
  CHECK(c.delta() == 0.5);
  CHECK(c.at(1.0).delta() == doctest::Approx(0.5 - 10.0 * 0.05));
}

TEST_CASE("theta agrees with adaptive quadrature of theta_dot on [0,100]") {
  for (double alpha : {1.05, 1.2, 2.0}) {
    GevreyClock c(params(1e-3, 20.0, 0.5, alpha));
    double worst = 0.0;
    for (double t = 0.0; t <= 100.0; t += 0.5) {
      const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double s) { return c.theta_dot_at(s); }, 0.0, t, 15, 1e-14);
      worst = std::max(worst, std::abs(q - c.theta_at(t)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("theta is nondecreasing and concave") {
  GevreyClock c(params(0.04, 1.0, 1.0, 1.3));
  const double h = 0.25;
  for (double t = h; t < 50.0; t += h) {
    const double a = c.theta_at(t - h), b = c.theta_at(t), d = c.theta_at(t + h);
    CHECK(b >= a);
    CHECK(a - 2 * b + d <= 1e-15);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(GevreyClock(params(0.01, 1.0, 0.5, 1.0)), ParameterError);
  CHECK_THROWS_AS(GevreyClock(params(0.0, 1.0, 0.5, 1.5)), ParameterError);
  ClockParams p = params(0.01, 1.0, 0.5, 1.5);
  p.kappa = 2.0;
  CHECK_THROWS_AS(GevreyClock{p}, ParameterError);
}

TEST_CASE("l_kappa and gamma0") {
  ClockParams p = params(1e-8, 20.0, 0.5, 1.2);
  GevreyClock c(p);
  CHECK(c.l_kappa() == doctest::Approx(0.25));
  CHECK(c.gamma0() == doctest::Approx(1.2));
  p.kappa = 0.5;
  CHECK(GevreyClock(p).l_kappa() == doctest::Approx(0.1875));
}

TEST_CASE("saturation classification") {
  // theta_inf = sqrt(eps)/(alpha-1) against delta0/(4 lambda) = 0.00625.
  GevreyClock bad(params(1e-3, 20.0, 0.5, 1.175));
  CHECK(bad.theta_limit() == doctest::Approx(std::sqrt(1e-3) / 0.175));
  CHECK_FALSE(bad.saturation_holds());
  GevreyClock good(params(1e-8, 20.0, 0.5, 1.2));
  CHECK(good.theta_limit() == doctest::Approx(5e-4));
  CHECK(good.saturation_holds());
}

TEST_CASE("radius guard") {
  // delta0/(2 lambda) = 0.025 is reached since theta_inf = 0.1.
  GevreyClock c(params(0.01, 10.0, 0.5, 2.0));
  CHECK_FALSE(c.radius_guard_tripped());
  const double t_hit = 1.0 / (1.0 - 0.025 / 0.1) - 1.0;
  CHECK_FALSE(c.at(t_hit * 0.99).radius_guard_tripped());
  CHECK(c.at(t_hit * 1.01).radius_guard_tripped());
  GevreyClock free(params(0.01, 0.0, 0.5, 2.0));
  CHECK_FALSE(free.at(1e6).radius_guard_tripped());
}

TEST_CASE("symbols") {
  CHECK(bracket(0) == 1.0);
  CHECK(gevrey_phase(1) == doctest::Approx(std::cbrt(2.0)));
  CHECK(q_symbol(0) == 0.0);
  CHECK(q_symbol(1) == doctest::Approx(std::pow(2.0, -2.0 / 3.0)));
  for (int xi = -300; xi <= 300; ++xi) {
    CHECK(bracket(xi) >= 1.0);
    CHECK(std::abs(q_symbol(xi)) <= std::pow(bracket(xi), -1.0 / 3.0) + 1e-15);
  }
}

TEST_CASE("apply_gevrey") {
  Grid g(16, 16, 2.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<double> s(g.size());
  for (auto& v : s) v = n(rng);
  auto f = to_spectral(g, s);
  CHECK((apply_gevrey(f, 0.0) - f).max_abs() == 0.0);

  auto e1 = sample_field(g, [](double x, double) { return std::exp(Complex{0.0, x}); });
  auto amp = apply_gevrey(e1, 0.1);
  CHECK(std::abs(amp.at_mode(0, 1)) == doctest::Approx(std::exp(0.1 * std::cbrt(2.0))));

  auto back = apply_gevrey(apply_gevrey(f, 0.3, +1), 0.3, -1);
  CHECK((back - f).max_abs() / f.max_abs() < 1e-13);

  CHECK_THROWS_AS(apply_gevrey(f, 600.0), RangeError);
  CHECK_NOTHROW(apply_gevrey(f, 600.0, -1));
  CHECK_THROWS_AS(apply_gevrey(f, -0.1), ParameterError);

  // Amplification nondecreasing in |xi|.
  for (int xi = 0; xi < 300; ++xi) CHECK(gevrey_phase(xi + 1) >= gevrey_phase(xi));
}

TEST_CASE("damping factor") {
  GevreyClock zero(params(0.01, 0.0, 0.5, 2.0));
  CHECK(gevrey_damping_factor(zero, 0.1, 5) == 1.0);
  GevreyClock c(params(0.01, 10.0, 0.5, 2.0));
  const double th = 0.1 * (1.0 - 1.0 / 1.1);
  CHECK(gevrey_damping_factor(c, 0.1, 0) == doctest::Approx(std::exp(-10.0 * th)));
  CHECK(gevrey_damping_factor(c, 0.1, 1) == doctest::Approx(std::exp(-10.0 * th * std::cbrt(2.0))));
  CHECK(std::log(gevrey_damping_factor(c, 0.1, 1)) == doctest::Approx(-0.11454).epsilon(1e-4));
  CHECK_THROWS_AS(gevrey_damping_factor(c, 0.0, 1), ParameterError);
}

TEST_CASE("convexity") {
  CHECK(check_convexity(0, 0));
  CHECK(check_convexity(3, 1));
  CHECK(std::cbrt(10.0) == doctest::Approx(2.1544).epsilon(1e-4));
  int violations = 0;
  for (int xi = -256; xi <= 256; ++xi)
    for (int eta = -256; eta <= 256; ++eta) violations += !check_convexity(xi, eta);
  CHECK(violations == 0);
}
