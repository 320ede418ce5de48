#include "gmhd/littlewood_paley.hpp"

#include <cmath>
#include <numbers>

#include "gmhd/errors.hpp"

namespace gmhd {

namespace {

constexpr double kLow = 0.75;
constexpr double kHigh = 8.0 / 3.0;

int abs_mode(const Grid& g, int m) { return std::abs(g.mode(m)); }

SpectralField weighted(const SpectralField& f, const DyadicLadder& L, int k, bool cumulative) {
  const Grid& g = f.grid();
  std::vector<double> w(g.nx());
  for (int m = 0; m < g.nx(); ++m)
    w[m] = cumulative ? L.low_pass(k, abs_mode(g, m)) : L.block(k, abs_mode(g, m));
  SpectralField out(g, f.parity());
  for (int j = 0; j < g.nodes(); ++j) {
    auto src = f.row(j);
    auto dst = out.row(j);
    for (int m = 0; m < g.nx(); ++m) dst[m] = w[m] * src[m];
  }
  return out;
}

// Physical samples of Delta_k f for k = -1..k_max, stored at index k+1.
std::vector<PhysicalSamples> physical_blocks(const SpectralField& f, const DyadicLadder& L) {
  std::vector<PhysicalSamples> out;
  out.reserve(L.k_max() + 2);
  for (int k = -1; k <= L.k_max(); ++k) out.push_back(from_spectral(weighted(f, L, k, false)));
  return out;
}

SpectralField finish_product(const Grid& g, const PhysicalSamples& acc) {
  auto out = to_spectral(g, std::span<const Complex>(acc));
  dealias(out);
  return out;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
}

}  // namespace

double DyadicLadder::raw_bump(double r) {
  if (r <= kLow || r >= kHigh) return 0.0;
  const double c = 0.5 * (kLow + kHigh);
  const double w = 0.5 * (kHigh - kLow);
  const double u = (r - c) / w;
  return std::exp(-1.0 / (1.0 - u * u));
}

DyadicLadder::DyadicLadder(int nx) : nx_(nx) {
  if (nx < 2 || nx % 2 != 0) throw DimensionError("ladder needs an even nx");
  const int rmax = nx / 2;
  k_max_ = -1;
  while (std::ldexp(static_cast<double>(rmax), -(k_max_ + 1)) > kLow) ++k_max_;

  weights_.assign(k_max_ + 2, std::vector<double>(rmax + 1, 0.0));
  weights_[0][0] = 1.0;
  for (int r = 1; r <= rmax; ++r) {
    // Normalising sum over every j in Z whose bump reaches r.
    const int jlo = static_cast<int>(std::floor(std::log2(r / kHigh)));
    const int jhi = static_cast<int>(std::ceil(std::log2(r / kLow)));
    double total = 0.0;
    for (int j = jlo; j <= jhi; ++j) total += raw_bump(std::ldexp(static_cast<double>(r), -j));
    double high = 0.0;
    for (int k = 0; k <= k_max_; ++k) {
      const double v = raw_bump(std::ldexp(static_cast<double>(r), -k)) / total;
      weights_[k + 1][r] = v;
      high += v;
    }
    if (r > 1) {
      // chi vanishes beyond 4/3; absorb rounding into the dyadic blocks.
      for (int k = 0; k <= k_max_; ++k) weights_[k + 1][r] /= high;
      weights_[0][r] = 0.0;
    } else {
      weights_[0][r] = 1.0 - high;
    }
  }
}

double DyadicLadder::block(int k, int r) const {
  if (k < -1 || k > k_max_) return 0.0;
  return weights_.at(k + 1).at(r);
}

double DyadicLadder::low_pass(int k, int r) const {
  if (k <= -1) return 0.0;
  if (k > k_max_ + 1) k = k_max_ + 1;
  double s = 0.0;
  for (int j = -1; j <= k - 1; ++j) s += block(j, r);
  return s;
}

SpectralField lp_block(const SpectralField& f, int k) {
  return weighted(f, DyadicLadder(f.grid().nx()), k, false);
}

SpectralField low_pass(const SpectralField& f, int k) {
  return weighted(f, DyadicLadder(f.grid().nx()), k, true);
}

SpectralField paraproduct(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  const DyadicLadder L(grid.nx());
  const auto fb = physical_blocks(f, L);
  const auto gb = physical_blocks(g, L);
  PhysicalSamples acc(grid.size(), Complex{0.0, 0.0});
  PhysicalSamples low(grid.size(), Complex{0.0, 0.0});
  for (int k = 1; k <= L.k_max(); ++k) {
    const auto& add = fb[k - 1];  // Delta_{k-2} f joins S_{k-1} f
    const auto& hi = gb[k + 1];
    for (std::size_t i = 0; i < acc.size(); ++i) {
      low[i] += add[i];
      acc[i] += low[i] * hi[i];
    }
  }
  return finish_product(grid, acc);
}

SpectralField remainder(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const Grid& grid = f.grid();
  const DyadicLadder L(grid.nx());
  const auto fb = physical_blocks(f, L);
  const auto gb = physical_blocks(g, L);
  const int nb = static_cast<int>(fb.size());
  PhysicalSamples acc(grid.size(), Complex{0.0, 0.0});
  for (int a = 0; a < nb; ++a)
    for (int b = std::max(0, a - 1); b <= std::min(nb - 1, a + 1); ++b)
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fb[a][i] * gb[b][i];
  return finish_product(grid, acc);
}

SpectralField paraproduct_adjoint(const SpectralField& a, const SpectralField& g) {
  require_same_grid(a, g);
  const Grid& grid = a.grid();
  const DyadicLadder L(grid.nx());
  SpectralField masked = g;
  dealias(masked);
  const auto gp = from_spectral(masked);
  const auto ab = physical_blocks(a, L);
  SpectralField out(grid);
  PhysicalSamples low(grid.size(), Complex{0.0, 0.0});
  PhysicalSamples prod(grid.size());
  for (int k = 1; k <= L.k_max(); ++k) {
    const auto& add = ab[k - 1];
    for (std::size_t i = 0; i < prod.size(); ++i) {
      low[i] += add[i];
      prod[i] = std::conj(low[i]) * gp[i];
    }
    out += weighted(to_spectral(grid, std::span<const Complex>(prod)), L, k, false);
  }
  return out;
}

SpectralField bracket_power(const SpectralField& f, double s) {
  return apply_symbol(f, [s](int xi) {
    return Complex{std::pow(1.0 + static_cast<double>(xi) * xi, 0.5 * s), 0.0};
  });
}

SpectralField commutator_ds_para(const SpectralField& a, const SpectralField& f, double s) {
  if (s < 0.0 || s > 8.0) throw ParameterError("commutator order s must lie in [0, 8]");
  return bracket_power(paraproduct(a, f), s) - paraproduct(a, bracket_power(f, s));
}

double lorentz_pairing(const SpectralField& a, const SpectralField& f, const SpectralField& g,
                       double s1, double s2) {
  if (!(s1 > 0.0 && s2 > 0.0)) throw ParameterError("pairing orders must be positive");
  const auto first = l2_inner(bracket_power(paraproduct(a, d_x(f)), s1), bracket_power(g, s2));
  const auto second = l2_inner(bracket_power(paraproduct(a, d_x(g)), s2), bracket_power(f, s1));
  return first.real() + second.real();
}

SpectralField d_x_real(const SpectralField& f) {
  const int nyq = -f.grid().nx() / 2;
  return apply_symbol(f, [nyq](int xi) {
    return xi == nyq ? Complex{0.0, 0.0} : Complex{static_cast<double>(xi), 0.0};
  });
}

SpectralField q_operator(const SpectralField& f) {
  const int nyq = -f.grid().nx() / 2;
  return apply_symbol(f, [nyq](int xi) {
    return xi == nyq ? Complex{0.0, 0.0} : Complex{q_symbol(xi), 0.0};
  });
}

SpectralField multiplier_commutator(const SpectralField& a, const SpectralField& f,
                                    double delta, int expansion_order) {
  if (expansion_order != 0 && expansion_order != 1)
    throw ParameterError("expansion order must be 0 or 1");
  const auto fx = d_x(f);
  const auto fx_phi = apply_gevrey(fx, delta);
  auto out = apply_gevrey(paraproduct(a, fx), delta) - paraproduct(a, fx_phi);
  if (expansion_order == 1)
    out.axpy(-2.0 / 3.0 * delta, paraproduct(d_x_real(a), q_operator(fx_phi)));
  return out;
}

SpectralField multiplier_commutator(const SpectralField& a, const SpectralField& f,
                                    const GevreyClock& clock, int expansion_order) {
  return multiplier_commutator(a, f, clock.delta(), expansion_order);
}

}  // namespace gmhd
