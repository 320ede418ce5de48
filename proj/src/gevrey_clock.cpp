#include "gmhd/gevrey_clock.hpp"

#include <cmath>

#include "gmhd/errors.hpp"

namespace gmhd {

namespace {

constexpr double kMaxExponent = 500.0;

}  // namespace

GevreyClock::GevreyClock(const ClockParams& p, double t) : p_(p), t_(t) {
  if (!(p.alpha > 1.0)) throw ParameterError("alpha must exceed 1 (theta integral diverges)");
  if (!(p.epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(p.lambda >= 0.0)) throw ParameterError("lambda must be nonnegative");
  if (!(p.delta0 > 0.0)) throw ParameterError("delta0 must be positive");
  if (!(p.kappa > 0.0 && p.kappa < 2.0)) throw ParameterError("kappa must lie in (0, 2)");
  if (!(t >= 0.0)) throw ParameterError("time must be nonnegative");
  theta_ = theta_at(t);
}

double GevreyClock::theta_at(double t) const {
  if (!(t >= 0.0)) throw ParameterError("time must be nonnegative");
  // -expm1 keeps full relative accuracy for small t.
  const double a1 = p_.alpha - 1.0;
  return std::sqrt(p_.epsilon) * -std::expm1(-a1 * std::log1p(t)) / a1;
}

double GevreyClock::theta_dot_at(double t) const {
  return std::sqrt(p_.epsilon) * std::pow(japanese(t), -p_.alpha);
}

double GevreyClock::theta_limit() const { return std::sqrt(p_.epsilon) / (p_.alpha - 1.0); }

double GevreyClock::l_kappa() const { return p_.kappa * (2.0 - p_.kappa) / 4.0; }

bool GevreyClock::radius_guard_tripped() const {
  if (p_.lambda == 0.0) return false;
  return theta_ >= p_.delta0 / (2.0 * p_.lambda);
}

bool GevreyClock::saturation_holds() const {
  if (p_.lambda == 0.0) return true;
  return theta_limit() <= p_.delta0 / (4.0 * p_.lambda);
}

double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

double gevrey_phase(double xi) { return std::cbrt(1.0 + xi * xi); }

double q_symbol(double xi) { return xi / std::pow(1.0 + xi * xi, 2.0 / 3.0); }

SpectralField apply_gevrey(const SpectralField& f, double delta, int sign) {
  if (sign != 1 && sign != -1) throw ParameterError("sign must be +1 or -1");
  if (sign == 1 && delta < 0.0) throw ParameterError("negative Gevrey radius");
  const Grid& g = f.grid();
  if (sign == 1 && delta * gevrey_phase(g.max_abs_mode()) > kMaxExponent)
    throw RangeError("Gevrey exponent exceeds 500; reduce delta or nx");
  SpectralField out = apply_symbol(f, [&](int xi) {
    return Complex{std::exp(sign * delta * gevrey_phase(xi)), 0.0};
  });
  out.set_parity(f.parity());
  return out;
}

SpectralField apply_gevrey(const SpectralField& f, const GevreyClock& clock, int sign) {
  return apply_gevrey(f, clock.delta(), sign);
}

double gevrey_damping_factor(const GevreyClock& clock, double dt, int xi) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const double dtheta = clock.theta_at(clock.t() + dt) - clock.theta();
  return std::exp(-clock.params().lambda * dtheta * gevrey_phase(xi));
}

bool check_convexity(int xi, int eta) {
  return gevrey_phase(xi) <= gevrey_phase(xi - eta) + gevrey_phase(eta);
}

}  // namespace gmhd
