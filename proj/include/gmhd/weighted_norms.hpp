#pragma once

#include <utility>

#include "gmhd/spectral.hpp"

namespace gmhd {

/// Psi(t, y) = y^2 / (8 <t>).
double psi_weight(double t, double y);

struct NormSpec {
  double s = 0.0;      // horizontal regularity
  int k = 0;           // vertical derivatives 0..k
  double gamma = 1.0;  // multiplies Psi
  double t = 0.0;
};

/// sum_{l<=k} ( int e^{2 gamma Psi} 2pi sum_xi [xi]^{2s} |d_y^l f^|^2 dy )^{1/2},
/// over the retained modes, trapezoid rule in y.
double weighted_norm(const SpectralField& f, const NormSpec& spec);

/// Single-level version: only the l = level term.
double weighted_level_norm(const SpectralField& f, double s, double gamma, double t);

/// Re int e^{2 gamma Psi} 2pi sum_xi [xi]^{2s} f^ conj(g^) dy.
double weighted_inner(const SpectralField& f, const SpectralField& g, double s, double gamma,
                      double t);

/// max_j e^{gamma Psi(t, y_j)} ||f(., y_j)||_{H^s}.
double weighted_sup_norm(const SpectralField& f, double s, double gamma, double t);

/// Both sides of ||int_y^inf f||_{L^inf_Psi(H^s)} <~ <t>^{1/4} ||f||_{H^{s,0}_Psi}.
std::pair<double, double> tail_sup_bound_check(const SpectralField& f, double s, double t);

/// The three integrals of the weighted Poincare inequality, summed over
/// modes with the 2pi Plancherel factor.
struct PoincareTerms {
  double gradient = 0.0;  // int |d_y u|^2 e^{2Psi}
  double mass = 0.0;      // int |u|^2 e^{2Psi}
  double moment = 0.0;    // int |y u / <t>|^2 e^{2Psi}
};
PoincareTerms poincare_terms(const SpectralField& f, double t);

/// gradient >= mass / (2<t>), up to relative tolerance tol.
bool poincare_first_holds(const PoincareTerms& p, double t, double tol = 1e-6);
/// gradient >= s mass / (2<t>) + s(1-s)/4 moment, up to relative tolerance tol.
bool poincare_second_holds(const PoincareTerms& p, double t, double s, double tol = 1e-6);

}  // namespace gmhd
