#pragma once

#include "gmhd/spectral.hpp"

namespace gmhd {

struct ClockParams {
  double epsilon = 1e-8;
  double lambda = 20.0;
  double delta0 = 0.5;
  double alpha = 1.2;
  double eta = 0.05;
  double kappa = 1.0;
};

/// Radius bookkeeping: theta(t) is the accumulated loss, delta(t) the
/// current Gevrey radius delta0 - lambda * theta(t).
class GevreyClock {
 public:
  explicit GevreyClock(const ClockParams& p, double t = 0.0);

  const ClockParams& params() const { return p_; }
  double t() const { return t_; }
  double theta() const { return theta_; }
  double delta() const { return p_.delta0 - p_.lambda * theta_; }
  double theta_dot() const { return theta_dot_at(t_); }

  double theta_at(double t) const;
  double theta_dot_at(double t) const;
  /// theta(infinity) = epsilon^{1/2} / (alpha - 1).
  double theta_limit() const;

  double l_kappa() const;
  double gamma0() const { return 1.0 + l_kappa() - p_.eta; }

  /// Same parameters, evaluated at a new time.
  GevreyClock at(double t) const { return GevreyClock(p_, t); }

  /// True once theta reaches delta0 / (2 lambda).
  bool radius_guard_tripped() const;
  /// theta_limit() <= delta0 / (4 lambda).
  bool saturation_holds() const;

 private:
  ClockParams p_;
  double t_;
  double theta_;
};

inline double japanese(double t) { return 1.0 + t; }

/// [xi] = (1 + xi^2)^{1/2}.
double bracket(double xi);
/// [xi]^{2/3}, the Gevrey-3/2 phase.
double gevrey_phase(double xi);
/// Q(xi) = xi (1 + xi^2)^{-2/3}.
double q_symbol(double xi);

/// Multiplies coefficient (j, xi) by exp(sign * delta * [xi]^{2/3}).
SpectralField apply_gevrey(const SpectralField& f, double delta, int sign = +1);
SpectralField apply_gevrey(const SpectralField& f, const GevreyClock& clock, int sign = +1);

/// exp(-lambda (theta(t+dt) - theta(t)) [xi]^{2/3}).
double gevrey_damping_factor(const GevreyClock& clock, double dt, int xi);

/// [xi]^{2/3} <= [xi - eta]^{2/3} + [eta]^{2/3}.
bool check_convexity(int xi, int eta);

}  // namespace gmhd
