#pragma once

// Run configuration, orchestration of simulate / certify / converge /
// fit-decay, and the files each of them writes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmhd/certification.hpp"
#include "gmhd/evolution.hpp"
#include "gmhd/functionals.hpp"

namespace gmhd {

struct ExperimentConfig {
  ClockParams clock;
  std::optional<double> gamma0;  // defaults to 1 + l_kappa - eta
  int nx = 64;
  int ny = 256;
  double y_max = 86.7;
  double dt = 0.05;
  double t_end = 50.0;
  int record_cadence = 20;    // steps between records
  int snapshot_cadence = 0;   // records between snapshots; 0 = first and last only
  double tstar_threshold = std::numeric_limits<double>::infinity();
  double fit_t_start = 10.0;
  double fit_t_end = 50.0;
  int cert_samples = 20;
  std::uint64_t seed = 1;
  InitialProfile profile{ProfileFamily::canonical, 1e-3, 3};
  std::string output_dir = "run";

  double effective_gamma0() const;
};

/// Flat key = value text, '#' starts a comment. Unknown keys and malformed
/// values throw ParameterError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every key, floats with 17 significant digits; parse_config round-trips it.
std::string format_config(const ExperimentConfig& cfg);

/// "%.16e".
std::string format_double(double v);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  double alpha_chain_max = 0.0;   // 9/8 + l_kappa/2 - eta/2
  double theta_limit = 0.0;       // epsilon^{1/2} / (alpha - 1)
  double saturation_bound = 0.0;  // delta0 / (4 lambda)
  bool chain_ok = false;
  bool saturation_ok = false;
  bool ok() const { return errors.empty(); }
};

/// Hard checks on the model and grid; the alpha chain becomes a warning
/// with warn_only.
ValidationReport validate_config(const ExperimentConfig& cfg, bool warn_only = false);

struct StructuralStats {
  double divergence_u = 0.0;  // max over records of divergence_residual(u, v)
  double divergence_b = 0.0;  // same for (b, h)
  double wall_W = 0.0;        // max |W(0)| relative to max |W|
};

struct DecayFit {
  std::string column;
  double exponent = 0.0;  // NaN when the window has too few positive values
};

/// Extra columns beyond the E, D, H components.
const std::vector<std::string>& monitor_columns();

struct SimulationResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<EnergyRecord> records;
  StopReason stop = StopReason::none;
  double final_time = 0.0;
  long steps = 0;
  int guard_trips = 0;
  StructuralStats structure;
  std::optional<BudgetSeries> budget;
  std::vector<DecayFit> fits;
  double initial_smallness = 0.0;
  bool e0_holds = false;  // initial_smallness <= epsilon^2
  ValidationReport validation;

  /// Column index by name; throws ParameterError.
  std::size_t column(const std::string& name) const;
};

/// Validates, runs and writes timeseries.csv, summary.txt, config.txt,
/// snapshots and plot data into out_dir (created if missing). Throws
/// ParameterError on an invalid config before allocating any field.
SimulationResult run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                              bool warn_only = false);

/// Runs the selected probes on the default grid family with the config's
/// seed and sample count; writes certify_report.txt when out_dir is given.
std::vector<ProbeReport> run_certify(const ExperimentConfig& cfg,
                                     const std::vector<std::string>& lemmas,
                                     const std::optional<std::filesystem::path>& out_dir,
                                     const std::vector<GridSpec>& grids = default_grid_family());

struct ConvergenceRow {
  int level = 0;
  double dt = 0.0;
  int ny = 0;
  double heat_error = 0.0;
  double reformulation = 0.0;  // u, b and U2 identities, rows 2..ny-2
  double good_function = 0.0;  // G and G~ equations, rows 2..ny-2
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double heat_order = 0.0;
  double reformulation_order = 0.0;
  double good_function_order = 0.0;
  bool monotone = false;  // every curve strictly decreasing
};

/// Joint (dt, dy) halving over `levels` >= 3 levels with the config's
/// clock parameters. Writes converge_table.txt and one plot file per curve
/// when out_dir is given.
ConvergenceTable run_converge(const ExperimentConfig& cfg, int levels,
                              const std::optional<std::filesystem::path>& out_dir);

/// Reads a timeseries CSV and fits column against <t> over [t_a, t_b].
double fit_decay_csv(const std::filesystem::path& csv, const std::string& column, double t_a,
                     double t_b);

/// Least-squares slope of log2 of the values against the level index,
/// negated.
double fitted_order(const std::vector<double>& values);

}  // namespace gmhd
