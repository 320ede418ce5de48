#include "gmhd/functionals.hpp"

#include <cmath>

#include "gmhd/errors.hpp"
#include "gmhd/weighted_norms.hpp"

namespace gmhd {

namespace {

// H^{s,0}_{gamma Psi} norm of d_y^order f.
double norm0(const SpectralField& f, int order, double s, double t, double gamma = 1.0) {
  const SpectralField& g = order == 0 ? f : d_y(f, order);
  return weighted_level_norm(g, s, gamma, t);
}

double pair_norm(const SpectralField& f, const SpectralField& g, int order, double s, double t,
                 double gamma = 1.0) {
  return norm0(f, order, s, t, gamma) + norm0(g, order, s, t, gamma);
}

// Eight-term family shared by E, D and H: `extra` adds vertical derivatives,
// `s` lists the horizontal indices term by term.
Functional eight_terms(const MhdState& st, const AuxiliaryState& aux, const std::string& prefix,
                       int extra, const std::array<double, 8>& s) {
  const double t = st.t();
  const double base = st.clock().l_kappa() - st.clock().params().eta;
  const double T = japanese(t);
  auto w = [&](double shift) { return std::pow(T, shift + base); };
  const auto u_phi = st.phi(st.u()), b_phi = st.phi(st.b());
  const auto G_phi = st.phi(st.G()), Gt_phi = st.phi(st.G_tilde());
  Functional out;
  out.components = {
      {prefix + "_ub", w(0.0) * pair_norm(u_phi, b_phi, extra, s[0], t)},
      {prefix + "_U", w(0.0) * norm0(aux.U, extra, s[1], t)},
      {prefix + "_zeta", w(0.0) * pair_norm(aux.zeta, aux.zeta_tilde, extra, s[2], t)},
      {prefix + "_PN", w(0.0) * pair_norm(st.phi(st.P()), st.phi(st.N()), extra, s[3], t)},
      {prefix + "_G", w(1.0) * pair_norm(G_phi, Gt_phi, extra, s[4], t)},
      {prefix + "_dyG", w(1.5) * pair_norm(G_phi, Gt_phi, extra + 1, s[5], t)},
      {prefix + "_dy2G", w(2.0) * pair_norm(G_phi, Gt_phi, extra + 2, s[6], t)},
      {prefix + "_dy3G", w(2.5) * pair_norm(G_phi, Gt_phi, extra + 3, s[7], t)},
  };
  for (const auto& c : out.components) out.total += c.value;
  return out;
}

constexpr std::array<double, 8> kEnergyIndices{7.0, 7.0, 22.0 / 3, 20.0 / 3, 4.0, 3.0, 3.0, 2.0};
constexpr std::array<double, 8> kHigherIndices{22.0 / 3, 22.0 / 3, 23.0 / 3, 7.0,
                                               13.0 / 3, 10.0 / 3, 10.0 / 3, 7.0 / 3};

}  // namespace

Functional energy_E(const MhdState& s, const AuxiliaryState& aux) {
  return eight_terms(s, aux, "E", 0, kEnergyIndices);
}

Functional dissipation_D(const MhdState& s, const AuxiliaryState& aux) {
  return eight_terms(s, aux, "D", 1, kEnergyIndices);
}

Functional functional_H(const MhdState& s, const AuxiliaryState& aux) {
  return eight_terms(s, aux, "H", 0, kHigherIndices);
}

double initial_smallness(const MhdState& s, const AuxiliaryState& aux) {
  return pair_norm(s.phi(s.u()), s.phi(s.b()), 0, 22.0 / 3, s.t()) + energy_E(s, aux).total;
}

std::array<double, 4> tstar_terms(const MhdState& s) {
  const double t = s.t();
  const double T = japanese(t);
  const auto G = s.phi(s.G()), Gt = s.phi(s.G_tilde());
  return {pair_norm(G, Gt, 0, 4.0, t), std::sqrt(T) * pair_norm(G, Gt, 1, 3.0, t),
          T * pair_norm(G, Gt, 2, 3.0, t), std::pow(T, 1.5) * pair_norm(G, Gt, 3, 2.0, t)};
}

double tstar_lhs(const MhdState& s) {
  const auto q = tstar_terms(s);
  return q[0] + q[1] + q[2] + q[3];
}

TstarStatus tstar_monitor(const MhdState& s, double epsilon, double gamma0, double threshold) {
  const double l = s.clock().l_kappa();
  if (!(gamma0 > 1.0 && gamma0 < 1.0 + l))
    throw ParameterError("gamma0 must lie in (1, 1 + l_kappa)");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  TstarStatus st;
  st.lhs = tstar_lhs(s);
  st.ratio = st.lhs / (epsilon * std::pow(japanese(s.t()), -gamma0));
  st.pass = st.ratio <= threshold;
  return st;
}

std::array<double, 4> decay_products(const MhdState& s, double gamma0, double gamma) {
  const double t = s.t();
  const double T = japanese(t);
  const auto u = s.phi(s.u()), b = s.phi(s.b());
  constexpr double idx[4] = {4.0, 3.0, 3.0, 2.0};
  std::array<double, 4> out{};
  for (int m = 0; m < 4; ++m)
    out[m] = std::pow(T, gamma0 + 0.5 * m) * pair_norm(u, b, m, idx[m], t, gamma);
  return out;
}

EnergyRecord make_record(const MhdState& s, const AuxiliaryState& aux, double gamma0,
                         double tstar_threshold) {
  EnergyRecord r;
  r.t = s.t();
  r.theta = s.clock().theta();
  r.delta = s.clock().delta();
  auto E = energy_E(s, aux);
  auto D = dissipation_D(s, aux);
  auto H = functional_H(s, aux);
  r.E = E.total;
  r.D = D.total;
  r.H = H.total;
  const auto ts = tstar_monitor(s, s.clock().params().epsilon, gamma0, tstar_threshold);
  r.tstar_ratio = ts.ratio;
  r.tstar_pass = ts.pass;
  r.theta_guard = s.clock().radius_guard_tripped();
  for (auto* f : {&E, &D, &H})
    r.components.insert(r.components.end(), f->components.begin(), f->components.end());
  return r;
}

BudgetSeries budget_monitor(const std::vector<EnergyRecord>& records, double eta, double factor) {
  if (records.size() < 2) throw InsufficientDataError("budget needs at least two records");
  BudgetSeries out;
  out.B.reserve(records.size());
  double integral = 0.0;
  out.B.push_back(records[0].E);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (!(b.t > a.t)) throw ParameterError("records must be strictly increasing in t");
    integral += 0.5 * (b.t - a.t) * (a.D + b.D);
    out.B.push_back(b.E + 0.79 * eta * integral);
  }
  if (out.B[0] > 0.0)
    for (double v : out.B) out.max_ratio = std::max(out.max_ratio, v / out.B[0]);
  out.flagged = out.max_ratio > factor;
  return out;
}

double fit_decay(const std::vector<std::pair<double, double>>& series, double t_a, double t_b) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [t, v] : series) {
    if (t < t_a || t > t_b) continue;
    if (!(v > 0.0)) throw DomainError("decay fit needs positive values");
    const double x = std::log(japanese(t)), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 5) throw InsufficientDataError("decay fit needs at least five points in the window");
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw DomainError("degenerate time window");
  return (n * sxy - sx * sy) / den;
}

}  // namespace gmhd
