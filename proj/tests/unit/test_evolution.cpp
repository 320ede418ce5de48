#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "dense_oracles.hpp"
#include "gmhd/errors.hpp"
#include "gmhd/evolution.hpp"

using namespace gmhd;

namespace {

ClockParams test_params(double kappa = 1.0) {
  ClockParams p;
  p.epsilon = 1e-4;
  p.lambda = 1.0;
  p.delta0 = 0.2;
  p.alpha = 1.2;
  p.kappa = kappa;
  return p;
}

SpectralField x_independent(const Grid& g, double (*prof)(double)) {
  return sample_field(g, [prof](double, double y) { return prof(y); });
}

double gauss_bump(double y) { return y * std::exp(-y * y); }

// Rows at least two nodes from each wall: the composed stencils of the
// auxiliary identity reach a one-sided wall derivative from row 1.
double interior_max(const SpectralField& f) {
  double m = 0.0;
  for (int j = 2; j < f.grid().ny() - 1; ++j)
    for (const auto& c : f.row(j)) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("zero state is a fixed point") {
  Grid g(16, 32, 6.0);
  MhdState s{SpectralField(g), SpectralField(g), GevreyClock(test_params())};
  StepperConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 1.0;
  Integrator it(s, cfg);
  it.run([](const Integrator&) {});
  CHECK(it.stopped() == StopReason::t_end);
  CHECK(it.state().t() == doctest::Approx(1.0));
  CHECK(it.steps_taken() == 20);
  CHECK(it.state().u().max_abs() == 0.0);
  CHECK(it.state().b().max_abs() == 0.0);
  CHECK(it.aux().W.max_abs() == 0.0);
}

TEST_CASE("Crank-Nicolson amplification matches the discrete eigenvalue") {
  const double ymax = 4.0;
  Grid g(8, 40, ymax);
  const int k = 3;
  auto f = sample_field(g, [&](double, double y) { return std::sin(k * std::numbers::pi * y / ymax); });
  const double dt = 0.01;
  const double r = dt / (2.0 * g.dy() * g.dy());
  const double mu = 2.0 * (1.0 - std::cos(k * std::numbers::pi * g.dy() / ymax));
  const double amp = (1.0 - r * mu) / (1.0 + r * mu);
  auto next = crank_nicolson_solve(crank_nicolson_explicit(f, r), r);
  for (int j = 0; j < g.nodes(); ++j) CHECK(std::abs(next(j, 0) - amp * f(j, 0)) < 1e-12);
}

TEST_CASE("heat eigenmode decays at second order in dt") {
  const double ymax = 3.0;
  Grid g(8, 30, ymax);
  auto prof = [&](double y) { return std::sin(std::numbers::pi * y / ymax); };
  auto u0 = sample_field(g, [&](double, double y) { return prof(y); });
  const double mu = 2.0 * (1.0 - std::cos(std::numbers::pi * g.dy() / ymax)) / (g.dy() * g.dy());
  double prev = 0.0;
  for (double dt : {0.1, 0.05, 0.025}) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    Integrator it(MhdState(u0, SpectralField(g), GevreyClock(test_params())), cfg);
    it.run([](const Integrator&) {});
    REQUIRE(it.stopped() == StopReason::t_end);
    const auto expect = std::exp(-mu * 1.0) * u0;
    const double err = (it.state().u() - expect).max_abs();
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("x-independent fields feel pure diffusion") {
  Grid g(16, 48, 6.0);
  auto u = x_independent(g, gauss_bump);
  auto b = 0.5 * x_independent(g, [](double y) { return y * y * std::exp(-y); });
  MhdState s(u, b, GevreyClock(test_params(0.6)));
  CHECK(s.v().max_abs() == 0.0);
  auto [ru, rb] = rhs_main(s);
  CHECK((ru - d_y(u, 2)).max_abs() < 1e-14);
  CHECK((rb - 0.6 * d_y(b, 2)).max_abs() < 1e-14);
  CHECK(residual_A(s).max_abs() < 1e-14);
  CHECK(residual_B(s).max_abs() < 1e-14);
  CHECK(explicit_auxiliary(s, SpectralField(g)).max_abs() == 0.0);
  auto [z, zt] = assemble_zeta(s, SpectralField(g));
  CHECK((z - s.phi(u)).max_abs() == 0.0);
  CHECK((zt - s.phi(b)).max_abs() == 0.0);
  auto d = higher_order_diagnostics(s);
  CHECK(d.Z.max_abs() < 1e-14);
}

TEST_CASE("explicit terms for sin(x) e^{-y} against the closed form") {
  // v = cos x (e^{-y} - e^{-Y}), so -u u_x - v u_y = -sin x cos x e^{-y} e^{-Y}.
  const double Y = 2.0;
  double prev = 0.0;
  for (int ny : {64, 128}) {
    Grid g(16, ny, Y);
    auto u = sample_field(g, [](double x, double y) { return std::sin(x) * std::exp(-y); });
    MhdState s(u, SpectralField(g), GevreyClock(test_params()));
    auto [nu, nb] = explicit_main(s);
    auto expect = sample_field(g, [Y](double x, double y) {
      return -std::sin(x) * std::cos(x) * std::exp(-y - Y);
    });
    const double err = (nu - expect).max_abs();
    CHECK(err < 0.05 * expect.max_abs());
    if (prev > 0.0) CHECK(prev / err > 3.0);
    prev = err;
    CHECK(nb.max_abs() < 1e-15);
  }
}

TEST_CASE("explicit terms are quadratic") {
  Grid g(16, 48, 6.0);
  std::mt19937_64 rng(7);
  auto u = oracle::random_field(g, rng, 4);
  auto b = oracle::random_field(g, rng, 4);
  MhdState s1(u, b, GevreyClock(test_params()));
  MhdState s2(2.0 * u, 2.0 * b, GevreyClock(test_params()));
  auto [a1, c1] = explicit_main(s1);
  auto [a2, c2] = explicit_main(s2);
  CHECK(oracle::rel_diff(a2, 4.0 * a1) < 1e-13);
  CHECK(oracle::rel_diff(c2, 4.0 * c1) < 1e-13);
}

TEST_CASE("mean mode follows the averaged momentum equation") {
  // The xi = 0 part of -u u_x - v u_y + b b_x + h b_y is -d_y <u v> + d_y <b h>
  // to discretisation error; small amplitudes keep the cross-check in range.
  Grid g(16, 256, 6.0);
  std::mt19937_64 rng(11);
  // Two profiles per mode so the phase varies with y and <u v> is nonzero.
  auto u = 1e-2 * (oracle::random_field(g, rng, 3) + oracle::random_field(g, rng, 3));
  auto b = 1e-2 * (oracle::random_field(g, rng, 3) + oracle::random_field(g, rng, 3));
  MhdState s(u, b, GevreyClock(test_params()));
  auto [nu, nb] = explicit_main(s);
  auto flux = multiply(s.b(), s.h()) - multiply(s.u(), s.v());
  auto div = d_y(flux, 1);
  double err = 0.0, scale = 0.0;
  for (int j = 1; j < g.ny(); ++j) {
    err = std::max(err, std::abs(nu(j, 0) - div(j, 0)));
    scale = std::max(scale, std::abs(nu(j, 0)));
  }
  CHECK(scale > 0.0);
  CHECK(err < 0.02 * scale);
}

TEST_CASE("reformulated equations telescope to the weighted plain residual") {
  Grid g(16, 48, 6.0);
  std::mt19937_64 rng(3);
  const double kappa = 0.7;
  auto u = oracle::random_field(g, rng, 4);
  auto b = oracle::random_field(g, rng, 4);
  GevreyClock clock = GevreyClock(test_params(kappa)).at(0.4);
  MhdState s(u, b, clock);
  AuxiliaryState aux(g);
  aux.W = oracle::random_field(g, rng, 4);
  Tendencies tend{oracle::random_field(g, rng, 4), oracle::random_field(g, rng, 4),
                  oracle::random_field(g, rng, 4)};
  auto res = reformulation_residual(s, aux, tend);
  CHECK(oracle::rel_diff(res.u_eq, res.plain_u) < 1e-12);

  // Plain residual for b, assembled independently in physical space.
  auto phys = [](const SpectralField& f) { return from_spectral(f); };
  const auto pu = phys(u), pv = phys(s.v()), pbx = phys(d_x(b)), pby = phys(d_y(b, 1));
  const auto pbh = phys(b), ph = phys(s.h()), pux = phys(d_x(u)), puy = phys(d_y(u, 1));
  PhysicalSamples prod(pu.size());
  for (std::size_t i = 0; i < prod.size(); ++i)
    prod[i] = pu[i] * pbx[i] + pv[i] * pby[i] - pbh[i] * pux[i] - ph[i] * puy[i];
  auto nonlinear = to_spectral(g, prod);
  dealias(nonlinear);
  auto plain_b = tend.db - kappa * d_y(b, 2) + nonlinear;
  CHECK(oracle::rel_diff(res.b_eq, s.phi(plain_b)) < 1e-12);
}

TEST_CASE("higher-order diagnostics") {
  Grid g(16, 48, 6.0);
  std::mt19937_64 rng(21);
  auto u = oracle::random_field(g, rng, 4);
  auto b = oracle::random_field(g, rng, 4);
  const double kappa = 0.8;
  GevreyClock clock = GevreyClock(test_params(kappa)).at(1.0);

  MhdState nob(u, SpectralField(g), clock);
  CHECK(higher_order_diagnostics(nob).H_tilde.max_abs() == 0.0);
  CHECK(higher_order_diagnostics(nob).H.max_abs() == 0.0);

  MhdState s(u, b, clock);
  auto d = higher_order_diagnostics(s);
  // theta_dot * H~ = 2 kappa (b_x b_yy - b_y b_xy), evaluated pointwise.
  const auto bx = from_spectral(d_x(b)), by = from_spectral(d_y(b, 1));
  const auto byy = from_spectral(d_y(b, 2)), bxy = from_spectral(d_x(d_y(b, 1)));
  PhysicalSamples q(bx.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = 2.0 * kappa * (bx[i] * byy[i] - by[i] * bxy[i]);
  auto expect = to_spectral(g, q);
  dealias(expect);
  CHECK(oracle::rel_diff(clock.theta_dot() * d.H_tilde, expect) < 1e-12);
  for (const auto* f : {&d.H, &d.S, &d.S_tilde, &d.Z, &d.F}) CHECK(f->all_finite());
  CHECK(d.S.max_abs() > 0.0);
  CHECK(d.Z.max_abs() > 0.0);
}

TEST_CASE("auxiliary field is driven by the vertical velocity") {
  Grid g(16, 48, 6.0);
  auto u = sample_field(g, [](double x, double y) { return 0.1 * std::sin(x) * y * std::exp(-y * y); });
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.05;
  Integrator it(MhdState(u, SpectralField(g), GevreyClock(test_params())), cfg);
  it.run([](const Integrator&) {});
  CHECK(it.aux().W.max_abs() > 0.0);
  CHECK(it.aux().W.all_finite());
  CHECK((it.aux().U + d_y(it.aux().W, 1)).max_abs() == 0.0);

  StepperConfig off = cfg;
  off.evolve_auxiliary = false;
  Integrator it2(MhdState(u, SpectralField(g), GevreyClock(test_params())), off);
  it2.run([](const Integrator&) {});
  CHECK(it2.aux().W.max_abs() == 0.0);
  CHECK((it2.state().u() - it.state().u()).max_abs() == 0.0);
}

TEST_CASE("reformulation residual shrinks under joint refinement") {
  double prev_u = 0.0, prev_u2 = 0.0;
  for (int level = 0; level < 3; ++level) {
    const double dt = 0.02 / (1 << level);
    Grid g(16, 48 << level, 6.0);
    auto u0 = sample_field(g, [](double x, double y) { return 0.2 * std::sin(x) * y * std::exp(-y * y); });
    auto b0 = sample_field(g, [](double x, double y) { return 0.2 * std::cos(x) * y * y * std::exp(-y * y); });
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    Integrator it(MhdState(u0, b0, GevreyClock(test_params())), cfg);
    const int n_mid = static_cast<int>(std::lround(0.2 / dt));
    std::optional<MhdState> before, mid;
    std::optional<AuxiliaryState> aux_before, aux_mid;
    for (int n = 0; n <= n_mid; ++n) {
      if (n == n_mid - 1) { before = it.state(); aux_before = it.aux(); }
      if (n == n_mid) { mid = it.state(); aux_mid = it.aux(); }
      REQUIRE(it.step());
    }
    const auto& after = it.state();
    Tendencies tend{(1.0 / (2 * dt)) * (after.u() - before->u()),
                    (1.0 / (2 * dt)) * (after.b() - before->b()),
                    (1.0 / (2 * dt)) * (it.aux().W - aux_before->W)};
    auto res = reformulation_residual(*mid, *aux_mid, tend);
    const double ru = interior_max(res.u_eq), ru2 = interior_max(res.u2_eq);
    if (prev_u > 0.0) {
      CHECK(prev_u / ru > 3.0);
      CHECK(prev_u2 / ru2 > 3.0);
    }
    prev_u = ru;
    prev_u2 = ru2;
  }
}

TEST_CASE("radius guard halts before theta reaches delta0 / (2 lambda)") {
  Grid g(16, 32, 6.0);
  ClockParams p = test_params();
  p.epsilon = 1.0;
  p.lambda = 5.0;
  p.delta0 = 0.5;
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 10.0;
  Integrator it(MhdState{SpectralField(g), SpectralField(g), GevreyClock(p)}, cfg);
  it.run([](const Integrator&) {});
  CHECK(it.stopped() == StopReason::theta_guard);
  CHECK(it.state().clock().theta() < p.delta0 / (2 * p.lambda));
  CHECK(it.state().clock().at(it.state().t() + cfg.dt).radius_guard_tripped());
  CHECK(it.stop_time() == it.state().t());
  CHECK_FALSE(it.step());
}

TEST_CASE("CFL halving and floor") {
  Grid g(16, 64, 4.0);
  auto u = sample_field(g, [](double x, double y) { return 20.0 * std::sin(x) * y * std::exp(-y * y); });
  const double vmax = [&] {
    double m = 0.0;
    for (auto c : from_spectral(MhdState(u, SpectralField(g), GevreyClock(test_params())).v()))
      m = std::max(m, std::abs(c));
    return m;
  }();
  const double bound = 0.5 * g.dy() / vmax;

  StepperConfig cfg;
  cfg.dt = 8.0 * bound;
  cfg.t_end = 0.01;
  cfg.max_halvings = 1;
  Integrator floor_run(MhdState(u, SpectralField(g), GevreyClock(test_params())), cfg);
  CHECK_FALSE(floor_run.step());
  CHECK(floor_run.stopped() == StopReason::cfl_floor);

  cfg.max_halvings = 6;
  cfg.t_end = 1.0;
  Integrator ok(MhdState(u, SpectralField(g), GevreyClock(test_params())), cfg);
  REQUIRE(ok.step());
  CHECK(ok.dt() <= bound);
  CHECK(ok.dt() > 0.5 * bound);
}

TEST_CASE("configuration validation") {
  Grid g(16, 32, 6.0);
  MhdState s{SpectralField(g), SpectralField(g), GevreyClock(test_params())};
  StepperConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(Integrator(s, cfg).dt(), ParameterError);
  cfg.dt = 0.1;
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(Integrator(s, cfg).dt(), ParameterError);
  CHECK(stop_reason_name(StopReason::theta_guard) == "theta_guard");
}

TEST_CASE("tail flush zeroes only the top block below the floor") {
  Grid g(8, 16, 4.0);
  SpectralField f(g);
  for (int j = 0; j <= 16; ++j) f(j, 1) = j < 10 ? 1.0 : 1e-40;
  f(5, 1) = 1e-40;
  flush_tail(f, 1e-30);
  CHECK(f(16, 1) == 0.0);
  CHECK(f(10, 1) == 0.0);
  CHECK(f(9, 1) == 1.0);
  CHECK(f(5, 1) == 1e-40);
  SpectralField z(g);
  flush_tail(z, 1e-30);
  CHECK(z.max_abs() == 0.0);
}
