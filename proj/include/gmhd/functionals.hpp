#pragma once

// Weighted energy, dissipation and higher-order functionals of a run, the
// T_* decay monitor, the time-integrated budget and power-law fits.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "gmhd/evolution.hpp"
#include "gmhd/mhd_state.hpp"

namespace gmhd {

struct Component {
  std::string name;
  double value = 0.0;
};

/// A functional as its eight weighted terms and their sum.
struct Functional {
  double total = 0.0;
  std::vector<Component> components;
};

/// Time-weight exponents use l_kappa - eta from the state's clock.
Functional energy_E(const MhdState& s, const AuxiliaryState& aux);
Functional dissipation_D(const MhdState& s, const AuxiliaryState& aux);
Functional functional_H(const MhdState& s, const AuxiliaryState& aux);

/// Left side of the smallness hypothesis on the data:
/// ||(u_Phi, b_Phi)||_{H^{22/3,0}_Psi} + E.
double initial_smallness(const MhdState& s, const AuxiliaryState& aux);

/// The four-term G criterion and its ratio to epsilon <t>^{-gamma0}.
struct TstarStatus {
  double lhs = 0.0;
  double ratio = 0.0;
  bool pass = true;
};
/// <t>^{m/2} ||d_y^m (G_Phi, G~_Phi)||_{H^{s_m,0}_Psi}, m = 0..3, s = 4, 3, 3, 2.
std::array<double, 4> tstar_terms(const MhdState& s);
double tstar_lhs(const MhdState& s);
TstarStatus tstar_monitor(const MhdState& s, double epsilon, double gamma0, double threshold);

/// <t>^{gamma0 + m/2} ||d_y^m (u_Phi, b_Phi)||_{H^{s_m,0}_{gamma Psi}}, m = 0..3,
/// with s = 4, 3, 3, 2.
std::array<double, 4> decay_products(const MhdState& s, double gamma0, double gamma = 0.5);

struct EnergyRecord {
  double t = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  double E = 0.0;
  double D = 0.0;
  double H = 0.0;
  double tstar_ratio = 0.0;
  bool tstar_pass = true;
  bool theta_guard = false;
  std::vector<Component> components;
};

EnergyRecord make_record(const MhdState& s, const AuxiliaryState& aux, double gamma0,
                         double tstar_threshold);

/// B(t_i) = E(t_i) + 0.79 eta int_0^{t_i} D, trapezoid over the records.
struct BudgetSeries {
  std::vector<double> B;
  double max_ratio = 0.0;  // max_i B_i / B_0 (0 when B_0 = 0)
  bool flagged = false;    // max_ratio > factor
};
BudgetSeries budget_monitor(const std::vector<EnergyRecord>& records, double eta,
                            double factor = 10.0);

/// Least-squares slope of log value against log <t> over t in [t_a, t_b].
double fit_decay(const std::vector<std::pair<double, double>>& series, double t_a, double t_b);

}  // namespace gmhd
