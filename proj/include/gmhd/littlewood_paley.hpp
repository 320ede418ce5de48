#pragma once

#include <vector>

#include "gmhd/gevrey_clock.hpp"
#include "gmhd/spectral.hpp"

namespace gmhd {

/// Horizontal dyadic blocks on the integer mode set |xi| <= nx/2.
/// Block -1 carries chi, block k >= 0 carries phi(2^{-k} |xi|); the weights
/// sum to one at every mode.
class DyadicLadder {
 public:
  explicit DyadicLadder(int nx);

  int nx() const { return nx_; }
  int k_max() const { return k_max_; }

  /// Weight of block k at |xi| = r; zero for k <= -2 or k > k_max.
  double block(int k, int r) const;
  /// Weight of S_k = sum_{-1 <= j <= k-1} Delta_j at |xi| = r.
  double low_pass(int k, int r) const;
  double chi(int r) const { return block(-1, r); }

  /// The continuum bump phi(r), before normalisation; supported in [3/4, 8/3].
  static double raw_bump(double r);

 private:
  int nx_;
  int k_max_;
  std::vector<std::vector<double>> weights_;  // [k+1][r]
};

SpectralField lp_block(const SpectralField& f, int k);
SpectralField low_pass(const SpectralField& f, int k);

/// T_f g = sum_k S_{k-1} f * Delta_k g, dealiased.
SpectralField paraproduct(const SpectralField& f, const SpectralField& g);
/// R(f, g) = sum_{|k-k'| <= 1} Delta_k f * Delta_{k'} g, dealiased.
SpectralField remainder(const SpectralField& f, const SpectralField& g);
/// Conjugate transpose of g -> T_a g at each node.
SpectralField paraproduct_adjoint(const SpectralField& a, const SpectralField& g);

/// [D_x]^s with symbol (1 + xi^2)^{s/2}.
SpectralField bracket_power(const SpectralField& f, double s);

/// [D_x]^s T_a f - T_a [D_x]^s f.
SpectralField commutator_ds_para(const SpectralField& a, const SpectralField& f, double s);

/// Re([D]^{s1} T_a d_x f, [D]^{s2} g) + Re([D]^{s2} T_a d_x g, [D]^{s1} f).
double lorentz_pairing(const SpectralField& a, const SpectralField& f, const SpectralField& g,
                       double s1, double s2);

/// Order 0: (T_a d_x f)_Phi - T_a d_x f_Phi.
/// Order 1: additionally minus (2/3) delta T_{D_x a} Q(D_x) d_x f_Phi.
SpectralField multiplier_commutator(const SpectralField& a, const SpectralField& f,
                                    double delta, int expansion_order);
SpectralField multiplier_commutator(const SpectralField& a, const SpectralField& f,
                                    const GevreyClock& clock, int expansion_order);

/// D_x = (1/i) d_x, symbol xi.
SpectralField d_x_real(const SpectralField& f);
/// Q(D_x), symbol xi (1 + xi^2)^{-2/3}.
SpectralField q_operator(const SpectralField& f);

}  // namespace gmhd
