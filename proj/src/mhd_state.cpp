#include "gmhd/mhd_state.hpp"

#include <cmath>
#include <random>

#include "gmhd/errors.hpp"
#include "gmhd/littlewood_paley.hpp"
#include "gmhd/weighted_norms.hpp"

namespace gmhd {

namespace {

SpectralField times_y(const SpectralField& f, double c = 1.0) {
  return scale_by_profile(f, [c](double y) { return c * y; });
}

SpectralField bilinear_source(const SpectralField& b, const SpectralField& h,
                              const SpectralField& f, double theta_dot) {
  const auto fx = d_x(f);
  const auto fy = d_y(f, 1);
  const SpectralField* lhs[] = {&b, &h};
  const SpectralField* rhs[] = {&fx, &fy};
  auto out = multiply_sum(lhs, rhs);
  out *= 1.0 / theta_dot;
  return out;
}

}  // namespace

SpectralField stream_function(const SpectralField& f) { return -integrate_up(f); }

double compatibility_defect(const SpectralField& f) {
  const double scale = f.max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& c : integrate_column(f)) worst = std::max(worst, std::abs(c));
  return worst / scale;
}

double divergence_residual(const SpectralField& f, const SpectralField& w) {
  const Grid& g = f.grid();
  const auto fx = d_x(f);
  const double scale = std::max(fx.max_abs(), 1e-300);
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    auto a = fx.row(j), b = fx.row(j + 1);
    auto w0 = w.row(j), w1 = w.row(j + 1);
    for (int m = 0; m < g.nx(); ++m)
      worst = std::max(worst, std::abs((w1[m] - w0[m]) / g.dy() + 0.5 * (a[m] + b[m])));
  }
  return worst / scale;
}

MhdState::MhdState(SpectralField u, SpectralField b, GevreyClock clock)
    : u_(std::move(u)), b_(std::move(b)), clock_(std::move(clock)) {
  if (!(u_.grid() == b_.grid())) throw DimensionError("u and b live on different grids");
  u_.set_parity(Parity::dirichlet0);
  b_.set_parity(Parity::dirichlet0);
}

void MhdState::assign(SpectralField u, SpectralField b, GevreyClock clock) {
  if (!(u.grid() == u_.grid()) || !(b.grid() == u_.grid()))
    throw DimensionError("assigned fields live on a different grid");
  u_ = std::move(u);
  b_ = std::move(b);
  u_.set_parity(Parity::dirichlet0);
  b_.set_parity(Parity::dirichlet0);
  clock_ = std::move(clock);
  ++version_;
  cache_ = Cache{};
}

const SpectralField& MhdState::psi() const {
  if (!cache_.psi) cache_.psi = stream_function(u_);
  return *cache_.psi;
}

const SpectralField& MhdState::psi_tilde() const {
  if (!cache_.psi_t) cache_.psi_t = stream_function(b_);
  return *cache_.psi_t;
}

const SpectralField& MhdState::v() const {
  if (!cache_.v) cache_.v = -d_x(psi());
  return *cache_.v;
}

const SpectralField& MhdState::h() const {
  if (!cache_.h) cache_.h = -d_x(psi_tilde());
  return *cache_.h;
}

const SpectralField& MhdState::G() const {
  if (!cache_.G) cache_.G = u_ + times_y(psi(), 1.0 / (2.0 * japanese(t())));
  return *cache_.G;
}

const SpectralField& MhdState::G_tilde() const {
  if (!cache_.Gt) cache_.Gt = b_ + times_y(psi_tilde(), 1.0 / (2.0 * kappa() * japanese(t())));
  return *cache_.Gt;
}

const SpectralField& MhdState::P() const {
  if (!cache_.P) {
    const double td = clock_.theta_dot();
    if (!(td > 0.0)) throw ParameterError("theta_dot vanishes");
    cache_.P = bilinear_source(b_, h(), b_, td);
  }
  return *cache_.P;
}

const SpectralField& MhdState::N() const {
  if (!cache_.N) {
    const double td = clock_.theta_dot();
    if (!(td > 0.0)) throw ParameterError("theta_dot vanishes");
    cache_.N = bilinear_source(b_, h(), u_, td);
  }
  return *cache_.N;
}

SpectralField good_function_residual(const MhdState& s, const SpectralField& dtG) {
  const double T = japanese(s.t());
  const double td = s.clock().theta_dot();
  const auto& G = s.G();
  const auto& u = s.u();
  const auto& v = s.v();
  const auto& psi = s.psi();

  auto r = dtG - d_y(G, 2);
  r.axpy(1.0 / T, G);
  const auto Gx = d_x(G), Gy = d_y(G, 1);
  const auto ypsi_y = d_y(times_y(psi), 1);
  const auto uy = d_y(u, 1), psix = d_x(psi);
  {
    const SpectralField* a[] = {&u, &v};
    const SpectralField* b[] = {&Gx, &Gy};
    r += multiply_sum(a, b);
  }
  r.axpy(-1.0 / (2.0 * T), multiply(v, ypsi_y));
  r += times_y(integrate_up(multiply(uy, psix)), 1.0 / T);
  r.axpy(-td, s.P());
  r += times_y(integrate_up(s.P()), td / (2.0 * T));
  return r;
}

SpectralField good_function_residual_tilde(const MhdState& s, const SpectralField& dtGt) {
  const double T = japanese(s.t());
  const double k = s.kappa();
  const double td = s.clock().theta_dot();
  const auto& G = s.G_tilde();
  const auto& u = s.u();
  const auto& b = s.b();
  const auto& v = s.v();
  const auto& psi = s.psi();
  const auto& psit = s.psi_tilde();

  auto r = dtGt - k * d_y(G, 2);
  r.axpy(1.0 / T, G);
  const auto Gx = d_x(G), Gy = d_y(G, 1);
  {
    const SpectralField* a[] = {&u, &v};
    const SpectralField* c[] = {&Gx, &Gy};
    r += multiply_sum(a, c);
  }
  r.axpy(-1.0 / (2.0 * k * T), multiply(v, d_y(times_y(psit), 1)));
  const auto uy = d_y(u, 1), by = d_y(b, 1);
  const auto psitx = d_x(psit), psix = d_x(psi);
  {
    const SpectralField* a[] = {&uy, &by};
    const SpectralField* c[] = {&psitx, &psix};
    r += times_y(integrate_up(multiply_sum(a, c)), 1.0 / (2.0 * k * T));
  }
  r.axpy(-td, s.N());
  r += times_y(integrate_up(s.N()), td / (2.0 * k * T));
  return r;
}

ProfileFamily parse_profile_family(const std::string& name) {
  if (name == "zero") return ProfileFamily::zero;
  if (name == "canonical") return ProfileFamily::canonical;
  if (name == "single_mode") return ProfileFamily::single_mode;
  throw ParameterError("unknown initial profile '" + name +
                       "' (expected zero, canonical or single_mode)");
}

std::string profile_family_name(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::canonical: return "canonical";
    case ProfileFamily::single_mode: return "single_mode";
  }
  return "canonical";
}

MhdState make_initial_state(const Grid& grid, const InitialProfile& profile, unsigned long seed,
                            const GevreyClock& clock) {
  SpectralField u(grid, Parity::dirichlet0), b(grid, Parity::dirichlet0);
  if (profile.family == ProfileFamily::zero || profile.amplitude == 0.0)
    return MhdState(u, b, clock);

  const int band = std::min(profile.band, grid.retained_limit());
  std::vector<Complex> a(band + 1), c(band + 1);
  if (profile.family == ProfileFamily::single_mode) {
    if (band >= 1) {
      a[1] = Complex{0.0, -0.5};  // sin x
      c[1] = Complex{0.5, 0.0};   // cos x
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int xi = 1; xi <= band; ++xi) {
      const double w = 1.0 / (xi * xi);
      a[xi] = w * Complex{dist(rng), dist(rng)};
      c[xi] = w * Complex{dist(rng), dist(rng)};
    }
  }

  const auto profile_y = [](double y) { return (2.0 * y - 2.0 * y * y * y) * std::exp(-y * y); };
  const auto corrector = [](double y) { return y * std::exp(-y * y); };
  // Clamp to zero at y_max, then remove the trapezoid mean with the corrector.
  std::vector<double> pv(grid.nodes(), 0.0), cv(grid.nodes(), 0.0);
  double ip = 0.0, ic = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    pv[j] = profile_y(grid.y(j));
    cv[j] = corrector(grid.y(j));
    const double w = j == 0 ? 0.5 : 1.0;
    ip += w * pv[j];
    ic += w * cv[j];
  }
  const double shift = ip / ic;
  for (int j = 0; j <= grid.ny(); ++j) {
    const double p = profile.amplitude * (pv[j] - shift * cv[j]);
    for (int xi = 1; xi <= band; ++xi) {
      u.at_mode(j, xi) = p * a[xi];
      u.at_mode(j, -xi) = p * std::conj(a[xi]);
      b.at_mode(j, xi) = p * c[xi];
      b.at_mode(j, -xi) = p * std::conj(c[xi]);
    }
  }
  return MhdState(u, b, clock);
}

ControlProbe control_lemma_probe(const MhdState& s, int k, double gamma, int selector,
                                 bool magnetic) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
  if (selector < 1 || selector > kControlSelectors)
    throw SelectorError("control selector must lie in 1..8");
  const double t = s.t();
  const double T = japanese(t);
  const auto block = [&](const SpectralField& f) { return lp_block(s.phi(f), k); };
  const auto& f = magnetic ? s.b() : s.u();
  const auto& psi = magnetic ? s.psi_tilde() : s.psi();
  const auto& G = magnetic ? s.G_tilde() : s.G();

  const auto l2g = [&](const SpectralField& x) { return weighted_level_norm(x, 0.0, gamma, t); };
  const auto l2 = [&](const SpectralField& x) { return weighted_level_norm(x, 0.0, 1.0, t); };
  const auto supg = [&](const SpectralField& x) { return weighted_sup_norm(x, 0.0, gamma, t); };
  const auto sup = [&](const SpectralField& x) { return weighted_sup_norm(x, 0.0, 1.0, t); };

  const auto Gk = block(G);
  ControlProbe p;
  switch (selector) {
    case 1:
    case 2:
    case 3:
    case 4: {
      const int l = selector - 1;
      const auto fk = block(f);
      p.lhs = l == 0 ? l2g(fk) : l2g(d_y(fk, l));
      p.rhs = l == 0 ? l2(Gk) : l2(d_y(Gk, l));
      break;
    }
    case 5:
      p.lhs = supg(d_y(block(f), 2));
      p.rhs = sup(d_y(Gk, 2));
      break;
    case 6: {
      const auto yk = block(times_y(psi));
      p.lhs = l2g(d_y(yk, 1)) / T + l2g(d_y(yk, 2)) / std::sqrt(T);
      p.rhs = l2(d_y(Gk, 1));
      break;
    }
    case 7: {
      const auto yk = block(times_y(psi));
      p.lhs = supg(d_y(yk, 1)) * std::pow(T, -0.75) + supg(d_y(yk, 2)) * std::pow(T, -0.25);
      p.rhs = l2(d_y(Gk, 1));
      break;
    }
    case 8: {
      const auto yk = block(times_y(psi));
      p.lhs = l2g(d_y(yk, 3)) / std::sqrt(T);
      p.rhs = l2(d_y(Gk, 2));
      break;
    }
  }
  return p;
}

}  // namespace gmhd
