#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "gmhd/gevrey_clock.hpp"
#include "gmhd/spectral.hpp"

namespace gmhd {

/// psi = -int_y^{y_max} f dz, so that d_y psi = f and psi(y_max) = 0.
SpectralField stream_function(const SpectralField& f);

/// max_xi |psi(0, xi)| relative to the largest |f| coefficient: the
/// discrete version of the zero-mean hypothesis int_0^inf f dy = 0.
double compatibility_defect(const SpectralField& f);

/// Max over cell midpoints of |(w_{j+1} - w_j)/dy + (d_x f_j + d_x f_{j+1})/2|
/// relative to max |d_x f|; exact zero (to roundoff) for w = -d_x psi.
double divergence_residual(const SpectralField& f, const SpectralField& w);

/// Evolved pair (u, b) at time t with lazily derived quantities. The cache
/// is cleared on every mutation; a state is owned by one thread at a time.
class MhdState {
 public:
  MhdState(SpectralField u, SpectralField b, GevreyClock clock);

  const Grid& grid() const { return u_.grid(); }
  const SpectralField& u() const { return u_; }
  const SpectralField& b() const { return b_; }
  const GevreyClock& clock() const { return clock_; }
  double t() const { return clock_.t(); }
  double kappa() const { return clock_.params().kappa; }
  std::uint64_t version() const { return version_; }

  void assign(SpectralField u, SpectralField b, GevreyClock clock);

  const SpectralField& psi() const;
  const SpectralField& psi_tilde() const;
  const SpectralField& v() const;
  const SpectralField& h() const;
  /// G = u + y psi / (2<t>).
  const SpectralField& G() const;
  /// G~ = b + y psi~ / (2 kappa <t>).
  const SpectralField& G_tilde() const;
  /// P = (b d_x + h d_y) b / theta_dot.
  const SpectralField& P() const;
  /// N = (b d_x + h d_y) u / theta_dot.
  const SpectralField& N() const;

  /// Gevrey image at the state's radius delta(t).
  SpectralField phi(const SpectralField& f) const { return apply_gevrey(f, clock_); }

 private:
  struct Cache {
    std::optional<SpectralField> psi, psi_t, v, h, G, Gt, P, N;
  };
  SpectralField u_, b_;
  GevreyClock clock_;
  std::uint64_t version_ = 0;
  mutable Cache cache_;
};

/// Left-hand sides of the good-function equations with the supplied time
/// derivatives of G and G~.
SpectralField good_function_residual(const MhdState& s, const SpectralField& dtG);
SpectralField good_function_residual_tilde(const MhdState& s, const SpectralField& dtGt);

enum class ProfileFamily { zero, canonical, single_mode };

struct InitialProfile {
  ProfileFamily family = ProfileFamily::canonical;
  double amplitude = 1.0;
  int band = 3;  // highest x-mode of the trigonometric factors
};

ProfileFamily parse_profile_family(const std::string& name);
std::string profile_family_name(ProfileFamily f);

/// u0 = A a(x) d_y(y^2 e^{-y^2}), b0 = A c(x) d_y(y^2 e^{-y^2}) with a, c
/// seeded low-band trigonometric polynomials, then projected so that the
/// trapezoid integral of every mode vanishes.
MhdState make_initial_state(const Grid& grid, const InitialProfile& profile, unsigned long seed,
                            const GevreyClock& clock);

/// Control probes: both sides of the selected inequality
/// for block k, using (u, psi, G) or (b, psi~, G~).
struct ControlProbe {
  double lhs = 0.0;
  double rhs = 0.0;
};
constexpr int kControlSelectors = 8;
ControlProbe control_lemma_probe(const MhdState& s, int k, double gamma, int selector,
                                 bool magnetic);
/// Row 4 of the control family is stated without proof.
inline bool control_selector_unproved(int selector) { return selector == 4; }

}  // namespace gmhd
