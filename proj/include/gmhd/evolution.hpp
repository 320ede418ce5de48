#pragma once

#include <optional>
#include <string>
#include <utility>

#include "gmhd/mhd_state.hpp"

namespace gmhd {

struct StepperConfig {
  double dt = 0.05;
  double t_end = 1.0;
  double cfl = 0.5;
  int max_halvings = 6;  // dt floor = dt / 2^max_halvings
  bool evolve_auxiliary = true;
  bool theta_guard = true;
  /// Rows above the profile whose coefficients all fall below tail_floor
  /// times the field maximum are set to zero after every step.
  double tail_floor = 1e-30;
};

struct AuxiliaryState {
  SpectralField W;           // int_y^inf U dz
  SpectralField U;           // -d_y W
  SpectralField zeta;
  SpectralField zeta_tilde;
  explicit AuxiliaryState(const Grid& g) : W(g), U(g), zeta(g), zeta_tilde(g) {}
};

enum class StopReason { none, t_end, theta_guard, tstar_guard, overflow, cfl_floor, non_finite };
std::string stop_reason_name(StopReason r);

/// du/dt and db/dt of the boundary-layer system, diffusion included.
std::pair<SpectralField, SpectralField> rhs_main(const MhdState& s);

/// Explicit part only: -u u_x - v u_y + b b_x + h b_y and
/// -u b_x - v b_y + b u_x + h u_y.
std::pair<SpectralField, SpectralField> explicit_main(const MhdState& s);

/// Transport part of the W equation, forcing included:
/// -T_u d_x W - T_v d_y W - (2/3) delta T_{D_x u} Q d_x W - theta_dot v_Phi.
SpectralField explicit_auxiliary(const MhdState& s, const SpectralField& W);

/// zeta and zeta~ from the current state and W.
std::pair<SpectralField, SpectralField> assemble_zeta(const MhdState& s, const SpectralField& W);

/// Solves (1 + 2r) x_j - r (x_{j-1} + x_{j+1}) = rhs_j with x_0 = x_ny = 0
/// for every mode (one real tridiagonal system shared by all modes).
SpectralField crank_nicolson_solve(const SpectralField& rhs, double r);
/// f + r (f_{j-1} - 2 f_j + f_{j+1}) at interior nodes, zero at the walls.
SpectralField crank_nicolson_explicit(const SpectralField& f, double r);

/// Zeroes the contiguous block of top rows below floor * max|f|.
void flush_tail(SpectralField& f, double floor);

/// Integrator for (u, b) and the auxiliary W: Crank-Nicolson diffusion,
/// second-order Adams-Bashforth transport, Heun start after any dt change.
class Integrator {
 public:
  Integrator(MhdState initial, const StepperConfig& cfg);

  const MhdState& state() const { return state_; }
  const AuxiliaryState& aux() const { return aux_; }
  double dt() const { return dt_; }
  StopReason stopped() const { return stopped_; }
  double stop_time() const { return stop_time_; }
  long steps_taken() const { return steps_; }

  /// Takes one step (dt clipped to t_end). Returns false and records the
  /// reason if a guard trips; the state is then left untouched.
  bool step();

  /// Marks the run as halted by an external monitor.
  void halt(StopReason reason);

  /// Runs until t_end or a guard trip; calls on_step after every step.
  template <typename F>
  void run(F&& on_step) {
    while (stopped_ == StopReason::none) {
      if (!step()) break;
      on_step(*this);
    }
  }

 private:
  struct History {
    SpectralField nu, nb, nw;  // nw already carries its step's damping
    double dt;
  };
  bool advance(double dt);

  MhdState state_;
  AuxiliaryState aux_;
  StepperConfig cfg_;
  double dt_;
  double dt_floor_;
  std::optional<History> prev_;
  StopReason stopped_ = StopReason::none;
  double stop_time_ = 0.0;
  long steps_ = 0;
};

/// Time derivatives supplied to the residual checks (centred differences
/// of the discrete trajectory).
struct Tendencies {
  SpectralField du, db, dW;
};

struct ReformulationResidual {
  SpectralField u_eq;    // L u_Phi + T_{u_y} v_Phi + (2/3) delta T Q v_Phi + A - theta_dot P_Phi
  SpectralField b_eq;    // same for b with kappa, B and N
  SpectralField u2_eq;   // derivative identity for U
  SpectralField plain_u; // (u_t - u_yy + u u_x + v u_y - theta_dot P)_Phi
};

/// A and B term by term.
SpectralField residual_A(const MhdState& s);
SpectralField residual_B(const MhdState& s);

/// L_kappa f with its time part d_t f + lambda theta_dot [D]^{2/3} f supplied
/// by the caller; for f = g_Phi that time part equals (d_t g)_Phi.
SpectralField apply_L(const MhdState& s, const SpectralField& f, const SpectralField& time_part,
                      double kappa);

ReformulationResidual reformulation_residual(const MhdState& s, const AuxiliaryState& aux,
                                             const Tendencies& tend);

/// Residual of the slaved h-equation: (d_t + u d_x + v d_y - kappa d_y^2) h - (b v_x - h u_x).
SpectralField induction_residual(const MhdState& s, const SpectralField& dth);

struct HigherOrderDiagnostics {
  SpectralField H, H_tilde, S, S_tilde, Z, F;
};
HigherOrderDiagnostics higher_order_diagnostics(const MhdState& s);

}  // namespace gmhd
