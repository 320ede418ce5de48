#include "gmhd/weighted_norms.hpp"

#include <cmath>
#include <numbers>

#include "gmhd/errors.hpp"

namespace gmhd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(double s, double gamma) {
  if (s < 0.0 || s > 8.0) throw ParameterError("norm regularity s must lie in [0, 8]");
  if (gamma < 0.0 || gamma > 1.0) throw ParameterError("weight scale gamma must lie in [0, 1]");
}

std::vector<double> symbol_weights(const Grid& g, double s) {
  std::vector<double> w(g.nx(), 0.0);
  for (int m = 0; m < g.nx(); ++m) {
    if (!g.retained(m)) continue;
    const double xi = g.mode(m);
    w[m] = std::pow(1.0 + xi * xi, s);
  }
  return w;
}

double trapezoid_weight(const Grid& g, int j) {
  return (j == 0 || j == g.ny()) ? 0.5 * g.dy() : g.dy();
}

double slice_energy(const SpectralField& f, int j, const std::vector<double>& w) {
  double e = 0.0;
  auto r = f.row(j);
  for (int m = 0; m < f.grid().nx(); ++m) e += w[m] * std::norm(r[m]);
  return kTwoPi * e;
}

// e^{expo} * e without overflowing when e^{expo} alone would.
double scaled(double e, double expo) {
  if (e == 0.0) return 0.0;
  return e > 0.0 ? std::exp(expo + std::log(e)) : -std::exp(expo + std::log(-e));
}

}  // namespace

double psi_weight(double t, double y) { return y * y / (8.0 * (1.0 + t)); }

double weighted_level_norm(const SpectralField& f, double s, double gamma, double t) {
  validate(s, gamma);
  if (!f.all_finite()) throw NumericError("non-finite field in weighted norm");
  const Grid& g = f.grid();
  const auto w = symbol_weights(g, s);
  double total = 0.0;
  for (int j = 0; j < g.nodes(); ++j)
    total += trapezoid_weight(g, j) *
             scaled(slice_energy(f, j, w), 2.0 * gamma * psi_weight(t, g.y(j)));
  return std::sqrt(total);
}

double weighted_norm(const SpectralField& f, const NormSpec& spec) {
  if (spec.k < 0 || spec.k > 4) throw ParameterError("vertical derivative count must lie in 0..4");
  double sum = weighted_level_norm(f, spec.s, spec.gamma, spec.t);
  for (int l = 1; l <= spec.k; ++l) sum += weighted_level_norm(d_y(f, l), spec.s, spec.gamma, spec.t);
  return sum;
}

double weighted_inner(const SpectralField& f, const SpectralField& g, double s, double gamma,
                      double t) {
  validate(s, gamma);
  if (!(f.grid() == g.grid())) throw DimensionError("fields live on different grids");
  const Grid& grid = f.grid();
  const auto w = symbol_weights(grid, s);
  double total = 0.0;
  for (int j = 0; j < grid.nodes(); ++j) {
    auto a = f.row(j);
    auto b = g.row(j);
    double row = 0.0;
    for (int m = 0; m < grid.nx(); ++m) row += w[m] * (a[m] * std::conj(b[m])).real();
    total += trapezoid_weight(grid, j) * scaled(row, 2.0 * gamma * psi_weight(t, grid.y(j)));
  }
  return kTwoPi * total;
}

double weighted_sup_norm(const SpectralField& f, double s, double gamma, double t) {
  validate(s, gamma);
  if (!f.all_finite()) throw NumericError("non-finite field in weighted sup norm");
  const Grid& g = f.grid();
  const auto w = symbol_weights(g, s);
  double best = 0.0;
  for (int j = 0; j < g.nodes(); ++j)
    best = std::max(best, scaled(std::sqrt(slice_energy(f, j, w)), gamma * psi_weight(t, g.y(j))));
  return best;
}

std::pair<double, double> tail_sup_bound_check(const SpectralField& f, double s, double t) {
  const double lhs = weighted_sup_norm(integrate_up(f), s, 1.0, t);
  const double rhs = std::pow(1.0 + t, 0.25) * weighted_level_norm(f, s, 1.0, t);
  return {lhs, rhs};
}

PoincareTerms poincare_terms(const SpectralField& f, double t) {
  const Grid& g = f.grid();
  const auto dy = d_y(f, 1);
  const std::vector<double> ones(g.nx(), 1.0);
  PoincareTerms p;
  for (int j = 0; j < g.nodes(); ++j) {
    const double y = g.y(j);
    const double e = 2.0 * psi_weight(t, y);
    const double w = trapezoid_weight(g, j);
    const double mass = scaled(slice_energy(f, j, ones), e);
    p.gradient += w * scaled(slice_energy(dy, j, ones), e);
    p.mass += w * mass;
    p.moment += w * mass * std::pow(y / (1.0 + t), 2);
  }
  return p;
}

bool poincare_first_holds(const PoincareTerms& p, double t, double tol) {
  const double rhs = p.mass / (2.0 * (1.0 + t));
  return p.gradient >= rhs * (1.0 - tol);
}

bool poincare_second_holds(const PoincareTerms& p, double t, double s, double tol) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("Poincare parameter s must lie in (0, 1)");
  const double rhs = s * p.mass / (2.0 * (1.0 + t)) + s * (1.0 - s) / 4.0 * p.moment;
  return p.gradient >= rhs * (1.0 - tol);
}

}  // namespace gmhd
