#include "gmhd/evolution.hpp"

#include <cmath>

#include "gmhd/errors.hpp"
#include "gmhd/littlewood_paley.hpp"

namespace gmhd {

namespace {

SpectralField T(const SpectralField& a, const SpectralField& f) { return paraproduct(a, f); }

SpectralField times_y(const SpectralField& f, double c = 1.0) {
  return scale_by_profile(f, [c](double y) { return c * y; });
}

double max_physical(const SpectralField& f) {
  double m = 0.0;
  for (const auto& v : from_spectral(f)) m = std::max(m, std::abs(v));
  return m;
}

SpectralField apply_damping(const SpectralField& f, const GevreyClock& clock, double dt) {
  const double p = clock.params().lambda;
  if (p == 0.0) return f;
  const double dtheta = clock.theta_at(clock.t() + dt) - clock.theta();
  return apply_symbol(f, [&](int xi) { return Complex{std::exp(-p * dtheta * gevrey_phase(xi)), 0.0}; });
}

SpectralField lambda_damping_term(const MhdState& s, const SpectralField& f) {
  const double c = s.clock().params().lambda * s.clock().theta_dot();
  return apply_symbol(f, [c](int xi) { return Complex{c * gevrey_phase(xi), 0.0}; });
}

// (T_a d_x f)_Phi - T_a d_x f_Phi - (2/3) delta T_{D_x a} Q d_x f_Phi.
SpectralField mc1(const MhdState& s, const SpectralField& a, const SpectralField& f) {
  return multiplier_commutator(a, f, s.clock(), 1);
}

// Shared shape of A and B: f is u or b.
SpectralField reformulation_source(const MhdState& s, const SpectralField& f) {
  const double delta = s.clock().delta();
  const auto& u = s.u();
  const auto& v = s.v();
  const auto v_phi = s.phi(v);
  const auto fy = d_y(f, 1);
  const auto fx = d_x(f);
  auto out = mc1(s, u, f);
  out += s.phi(T(fy, v)) - T(fy, v_phi);
  out.axpy(-2.0 / 3.0 * delta, T(d_x_real(fy), q_operator(v_phi)));
  out += s.phi(T(v, fy)) - T(v, d_y(s.phi(f), 1));
  out += s.phi(T(fx, u) + remainder(u, fx) + remainder(v, fy));
  return out;
}

// S (first = N, second = P) and S~ (first = P, second = N).
SpectralField lorentz_paraproduct_source(const MhdState& s, const SpectralField& first,
                                         const SpectralField& second) {
  const auto& u = s.u();
  const auto& v = s.v();
  const auto& b = s.b();
  const auto& h = s.h();
  const auto v_phi = s.phi(v);
  const auto h_phi = s.phi(h);
  const auto fy = d_y(first, 1), fx = d_x(first);
  const auto gy = d_y(second, 1), gx = d_x(second);
  auto out = mc1(s, u, first);
  out += s.phi(T(fy, v)) - T(fy, v_phi);
  out += s.phi(T(v, fy)) - T(v, d_y(s.phi(first), 1));
  out += s.phi(T(fx, u) + remainder(u, fx) + remainder(v, fy));
  out -= s.phi(T(gx, b) + remainder(b, gx) + remainder(h, gy));
  out -= mc1(s, b, second);
  out -= s.phi(T(gy, h)) - T(gy, h_phi);
  out -= s.phi(T(h, gy)) - T(h, d_y(s.phi(second), 1));
  return out;
}

}  // namespace

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::t_end: return "t_end";
    case StopReason::theta_guard: return "theta_guard";
    case StopReason::tstar_guard: return "tstar_guard";
    case StopReason::overflow: return "overflow";
    case StopReason::cfl_floor: return "cfl_floor";
    case StopReason::non_finite: return "non_finite";
  }
  return "unknown";
}

std::pair<SpectralField, SpectralField> explicit_main(const MhdState& s) {
  const auto& u = s.u();
  const auto& b = s.b();
  const auto& v = s.v();
  const auto& h = s.h();
  const auto ux = d_x(u), uy = d_y(u, 1), bx = d_x(b), by = d_y(b, 1);
  const auto mu = -u, mv = -v;
  const SpectralField* lu[] = {&mu, &mv, &b, &h};
  const SpectralField* ru[] = {&ux, &uy, &bx, &by};
  const SpectralField* rb[] = {&bx, &by, &ux, &uy};
  return {multiply_sum(lu, ru), multiply_sum(lu, rb)};
}

std::pair<SpectralField, SpectralField> rhs_main(const MhdState& s) {
  auto [nu, nb] = explicit_main(s);
  nu += d_y(s.u(), 2);
  nb.axpy(s.kappa(), d_y(s.b(), 2));
  return {nu, nb};
}

SpectralField explicit_auxiliary(const MhdState& s, const SpectralField& W) {
  const auto Wx = d_x(W);
  auto out = -T(s.u(), Wx);
  out -= T(s.v(), d_y(W, 1));
  out.axpy(-2.0 / 3.0 * s.clock().delta(), T(d_x_real(s.u()), q_operator(Wx)));
  out.axpy(-s.clock().theta_dot(), s.phi(s.v()));
  return out;
}

std::pair<SpectralField, SpectralField> assemble_zeta(const MhdState& s, const SpectralField& W) {
  const double td = s.clock().theta_dot();
  const double c = 2.0 * s.clock().delta() / (3.0 * td);
  const auto qW = q_operator(W);
  auto build = [&](const SpectralField& f) {
    const auto fy = d_y(f, 1);
    auto z = s.phi(f);
    z.axpy(-1.0 / td, T(fy, W));
    z.axpy(-c, T(d_x_real(fy), qW));
    return z;
  };
  return {build(s.u()), build(s.b())};
}

SpectralField crank_nicolson_solve(const SpectralField& rhs, double r) {
  const Grid& g = rhs.grid();
  const int n = g.ny() - 1;  // interior unknowns j = 1..ny-1
  // Thomas forward sweep coefficients, shared by all modes.
  std::vector<double> cp(n), denom(n);
  const double diag = 1.0 + 2.0 * r;
  for (int i = 0; i < n; ++i) {
    denom[i] = diag - (i > 0 ? -r * cp[i - 1] : 0.0);
    cp[i] = -r / denom[i];
  }
  SpectralField out(g, rhs.parity());
  std::vector<Complex> dp(n);
  for (int m = 0; m < g.nx(); ++m) {
    for (int i = 0; i < n; ++i) {
      const Complex prev = i > 0 ? dp[i - 1] : Complex{};
      dp[i] = (rhs(i + 1, m) + r * prev) / denom[i];
    }
    Complex x = dp[n - 1];
    out(n, m) = x;
    for (int i = n - 2; i >= 0; --i) {
      x = dp[i] - cp[i] * x;
      out(i + 1, m) = x;
    }
  }
  return out;
}

SpectralField crank_nicolson_explicit(const SpectralField& f, double r) {
  const Grid& g = f.grid();
  SpectralField out(g, f.parity());
  for (int j = 1; j < g.ny(); ++j) {
    auto lo = f.row(j - 1), mid = f.row(j), hi = f.row(j + 1);
    auto dst = out.row(j);
    for (int m = 0; m < g.nx(); ++m) dst[m] = mid[m] + r * (lo[m] - 2.0 * mid[m] + hi[m]);
  }
  return out;
}

void flush_tail(SpectralField& f, double floor) {
  if (floor <= 0.0) return;
  const double cut = floor * f.max_abs();
  for (int j = f.grid().ny(); j >= 0; --j) {
    auto r = f.row(j);
    bool small = true;
    for (const auto& c : r) small = small && std::abs(c) <= cut;
    if (!small) break;
    for (auto& c : r) c = 0.0;
  }
}

Integrator::Integrator(MhdState initial, const StepperConfig& cfg)
    : state_(std::move(initial)), aux_(state_.grid()), cfg_(cfg), dt_(cfg.dt) {
  if (!(cfg.dt > 0.0)) throw ParameterError("dt must be positive");
  if (!(cfg.t_end >= state_.t())) throw ParameterError("t_end precedes the initial time");
  if (!(cfg.cfl > 0.0)) throw ParameterError("cfl factor must be positive");
  dt_floor_ = std::ldexp(cfg.dt, -cfg.max_halvings);
  auto [z, zt] = assemble_zeta(state_, aux_.W);
  aux_.zeta = std::move(z);
  aux_.zeta_tilde = std::move(zt);
}

void Integrator::halt(StopReason reason) {
  if (stopped_ != StopReason::none) return;
  stopped_ = reason;
  stop_time_ = state_.t();
}

bool Integrator::step() {
  if (stopped_ != StopReason::none) return false;
  const double t = state_.t();
  const double remaining = cfg_.t_end - t;
  if (remaining <= 1e-9 * dt_) {
    halt(StopReason::t_end);
    return false;
  }
  const double vmax = max_physical(state_.v());
  const double bound = vmax > 0.0 ? cfg_.cfl * state_.grid().dy() / vmax : INFINITY;
  while (dt_ > bound) {
    dt_ *= 0.5;
    prev_.reset();
    if (dt_ < dt_floor_ * (1.0 - 1e-12)) {
      halt(StopReason::cfl_floor);
      return false;
    }
  }
  // Absorb a tiny final remainder into the last step.
  const double dt = remaining < dt_ * (1.0 + 1e-9) ? remaining : dt_;
  if (cfg_.theta_guard && state_.clock().at(t + dt).radius_guard_tripped()) {
    halt(StopReason::theta_guard);
    return false;
  }
  try {
    if (!advance(dt)) {
      halt(StopReason::non_finite);
      return false;
    }
  } catch (const RangeError&) {
    halt(StopReason::overflow);
    return false;
  }
  ++steps_;
  return true;
}

bool Integrator::advance(double dt) {
  const MhdState& s = state_;
  const Grid& g = s.grid();
  const double r_u = dt / (2.0 * g.dy() * g.dy());
  const double r_b = s.kappa() * r_u;
  const bool aux_on = cfg_.evolve_auxiliary;

  auto [nu, nb] = explicit_main(s);
  SpectralField nw = aux_on ? explicit_auxiliary(s, aux_.W) : SpectralField(g);
  const auto damp = [&](const SpectralField& f) { return apply_damping(f, s.clock(), dt); };

  const auto eu = crank_nicolson_explicit(s.u(), r_u);
  const auto eb = crank_nicolson_explicit(s.b(), r_b);
  const auto ew = crank_nicolson_explicit(aux_.W, r_u);
  const GevreyClock next_clock = s.clock().at(s.t() + dt);

  SpectralField u1(g), b1(g), w1(g);
  SpectralField nw_damped = aux_on ? damp(nw) : SpectralField(g);
  const bool ab2 = prev_ && std::abs(prev_->dt - dt) <= 1e-12 * dt;
  if (ab2) {
    auto ru = eu;
    ru.axpy(1.5 * dt, nu);
    ru.axpy(-0.5 * dt, prev_->nu);
    auto rb = eb;
    rb.axpy(1.5 * dt, nb);
    rb.axpy(-0.5 * dt, prev_->nb);
    u1 = crank_nicolson_solve(ru, r_u);
    b1 = crank_nicolson_solve(rb, r_b);
    if (aux_on) {
      auto rw = damp(ew);
      rw.axpy(1.5 * dt, nw_damped);
      rw.axpy(-0.5 * dt, damp(prev_->nw));
      w1 = crank_nicolson_solve(rw, r_u);
    }
  } else {
    // Heun: Euler predictor, trapezoidal corrector.
    auto pu = eu;
    pu.axpy(dt, nu);
    auto pb = eb;
    pb.axpy(dt, nb);
    MhdState pred(crank_nicolson_solve(pu, r_u), crank_nicolson_solve(pb, r_b), next_clock);
    SpectralField wpred(g);
    if (aux_on) {
      auto pw = damp(ew);
      pw.axpy(dt, nw_damped);
      wpred = crank_nicolson_solve(pw, r_u);
    }
    auto [nu_p, nb_p] = explicit_main(pred);
    auto cu = eu;
    cu.axpy(0.5 * dt, nu);
    cu.axpy(0.5 * dt, nu_p);
    auto cb = eb;
    cb.axpy(0.5 * dt, nb);
    cb.axpy(0.5 * dt, nb_p);
    u1 = crank_nicolson_solve(cu, r_u);
    b1 = crank_nicolson_solve(cb, r_b);
    if (aux_on) {
      auto cw = damp(ew);
      cw.axpy(0.5 * dt, nw_damped);
      cw.axpy(0.5 * dt, explicit_auxiliary(pred, wpred));
      w1 = crank_nicolson_solve(cw, r_u);
    }
  }
  if (!u1.all_finite() || !b1.all_finite() || !w1.all_finite()) return false;
  flush_tail(u1, cfg_.tail_floor);
  flush_tail(b1, cfg_.tail_floor);
  flush_tail(w1, cfg_.tail_floor);

  prev_ = History{std::move(nu), std::move(nb), std::move(nw_damped), dt};
  state_.assign(std::move(u1), std::move(b1), next_clock);
  aux_.W = std::move(w1);
  aux_.U = -d_y(aux_.W, 1);
  auto [z, zt] = assemble_zeta(state_, aux_.W);
  aux_.zeta = std::move(z);
  aux_.zeta_tilde = std::move(zt);
  return true;
}

SpectralField residual_A(const MhdState& s) { return reformulation_source(s, s.u()); }
SpectralField residual_B(const MhdState& s) { return reformulation_source(s, s.b()); }

SpectralField apply_L(const MhdState& s, const SpectralField& f, const SpectralField& time_part,
                      double kappa) {
  const auto fx = d_x(f);
  auto out = time_part;
  out += T(s.u(), fx);
  out += T(s.v(), d_y(f, 1));
  out.axpy(2.0 / 3.0 * s.clock().delta(), T(d_x_real(s.u()), q_operator(fx)));
  out.axpy(-kappa, d_y(f, 2));
  return out;
}

ReformulationResidual reformulation_residual(const MhdState& s, const AuxiliaryState& aux,
                                             const Tendencies& tend) {
  const double delta = s.clock().delta();
  const double td = s.clock().theta_dot();
  const auto& u = s.u();
  const auto& b = s.b();
  const auto& v = s.v();
  const auto v_phi = s.phi(v);
  const auto uy = d_y(u, 1), by = d_y(b, 1);

  auto u_eq = apply_L(s, s.phi(u), s.phi(tend.du), 1.0);
  u_eq += T(uy, v_phi);
  u_eq.axpy(2.0 / 3.0 * delta, T(d_x_real(uy), q_operator(v_phi)));
  u_eq += residual_A(s);
  u_eq.axpy(-td, s.phi(s.P()));

  auto b_eq = apply_L(s, s.phi(b), s.phi(tend.db), s.kappa());
  b_eq += T(by, v_phi);
  b_eq.axpy(2.0 / 3.0 * delta, T(d_x_real(by), q_operator(v_phi)));
  b_eq += residual_B(s);
  b_eq.axpy(-td, s.phi(s.N()));

  const auto& W = aux.W;
  const auto U = -d_y(W, 1);
  const auto Wx = d_x(W);
  auto u_time = -d_y(tend.dW, 1);
  u_time += lambda_damping_term(s, U);
  auto u2 = apply_L(s, U, u_time, 1.0);
  u2.axpy(td, d_x(s.phi(u)));
  u2 -= T(uy, Wx);
  u2 += T(d_y(v, 1), U);
  u2.axpy(-2.0 / 3.0 * delta, T(d_x_real(uy), q_operator(Wx)));

  auto plain = tend.du - d_y(u, 2);
  {
    const auto ux = d_x(u);
    const SpectralField* a[] = {&u, &v};
    const SpectralField* c[] = {&ux, &uy};
    plain += multiply_sum(a, c);
  }
  plain.axpy(-td, s.P());
  return {std::move(u_eq), std::move(b_eq), std::move(u2), s.phi(plain)};
}

SpectralField induction_residual(const MhdState& s, const SpectralField& dth) {
  const auto& h = s.h();
  const auto hx = d_x(h), hy = d_y(h, 1);
  auto r = dth - s.kappa() * d_y(h, 2);
  const SpectralField* a[] = {&s.u(), &s.v()};
  const SpectralField* c[] = {&hx, &hy};
  r += multiply_sum(a, c);
  r -= multiply(s.b(), d_x(s.v()));
  r += multiply(h, d_x(s.u()));
  return r;
}

HigherOrderDiagnostics higher_order_diagnostics(const MhdState& s) {
  const double td = s.clock().theta_dot();
  const double k = s.kappa();
  const double T_ = japanese(s.t());
  const auto& u = s.u();
  const auto& b = s.b();
  const auto& v = s.v();
  const auto& psi = s.psi();
  const auto ux = d_x(u), uy = d_y(u, 1), uyy = d_y(u, 2), uxy = d_y(ux, 1);
  const auto bx = d_x(b), by = d_y(b, 1), byy = d_y(b, 2), bxy = d_y(bx, 1);

  auto H = (2.0 / td) * (multiply(bx, uyy) - multiply(by, uxy));
  H.axpy((k - 1.0) / td, multiply(ux, byy) - multiply(uy, bxy));
  auto Ht = (2.0 * k / td) * (multiply(bx, byy) - multiply(by, bxy));

  auto S = lorentz_paraproduct_source(s, s.N(), s.P());
  auto St = lorentz_paraproduct_source(s, s.P(), s.N());

  const auto& G = s.G();
  const auto Gx = d_x(G), Gy = d_y(G, 1);
  const auto v_phi = s.phi(v);
  const auto ypsi_y = d_y(times_y(psi), 1);
  auto minus_Z = multiplier_commutator(u, G, s.clock(), 0);
  minus_Z += s.phi(T(Gx, u) + remainder(u, Gx));
  minus_Z += s.phi(T(Gy, v)) - T(Gy, v_phi);
  minus_Z += s.phi(T(v, Gy) + remainder(v, Gy));
  minus_Z.axpy(-1.0 / (2.0 * T_), s.phi(T(ypsi_y, v)) - T(ypsi_y, v_phi));
  minus_Z.axpy(-1.0 / (2.0 * T_), s.phi(T(v, ypsi_y) + remainder(ypsi_y, v)));
  minus_Z += times_y(integrate_up(s.phi(T(uy, v)) - T(uy, v_phi)), 1.0 / T_);
  minus_Z += times_y(integrate_up(s.phi(T(v, uy) + remainder(v, uy))), 1.0 / T_);

  const auto G_phi = s.phi(G);
  const auto tdP_phi = td * s.phi(s.P());
  auto flux = T(u, d_x(G_phi));
  flux += T(Gy, v_phi);
  flux.axpy(-1.0 / (2.0 * T_), T(ypsi_y, v_phi));
  flux += times_y(integrate_up(T(uy, v_phi)), 1.0 / T_);
  flux -= tdP_phi;
  flux += times_y(integrate_up(tdP_phi), 1.0 / (2.0 * T_));

  return {std::move(H), std::move(Ht), std::move(S), std::move(St), -minus_Z, d_y(flux, 2)};
}

}  // namespace gmhd
