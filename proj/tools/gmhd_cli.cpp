#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "gmhd/errors.hpp"
#include "gmhd/experiment.hpp"

using namespace gmhd;

namespace {

struct Common {
  std::string config;
  std::string out;
  long long seed = -1;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int simulate(const Common& c, bool warn_only) {
  const auto cfg = load(c);
  const auto r = run_simulate(cfg, cfg.output_dir, warn_only);
  for (const auto& w : r.validation.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("%s: %zu records, t = %.6g, stop = %s\n", cfg.output_dir.c_str(), r.records.size(),
              r.final_time, stop_reason_name(r.stop).c_str());
  if (!r.e0_holds) std::printf("note: initial smallness %.3e exceeds epsilon^2\n", r.initial_smallness);
  for (const auto& f : r.fits) std::printf("fit %-14s %.4f\n", f.column.c_str(), f.exponent);
  return 0;
}

int certify_cmd(const Common& c, const std::string& lemmas) {
  const auto cfg = load(c);
  const auto ids = lemmas.empty() ? default_selectors() : split_csv(lemmas);
  const auto reports = run_certify(cfg, ids, c.out.empty() ? std::nullopt : std::optional<std::filesystem::path>(c.out));
  bool exact_fail = false;
  std::printf("%-18s %-6s %12s %10s %10s  %s\n", "lemma", "class", "max_ratio", "violations", "drift", "status");
  for (const auto& r : reports) {
    std::printf("%-18s %-6s %12.4e %10ld %10.3e  %s\n", r.lemma_id.c_str(), r.exact ? "exact" : "bound",
                r.max_ratio, r.violations, r.refinement_drift, r.passed() ? "PASS" : "FAIL");
    exact_fail |= r.exact && r.violations > 0;
  }
  return exact_fail ? 2 : 0;
}

int converge_cmd(const Common& c, int levels) {
  const auto cfg = load(c);
  const auto t = run_converge(cfg, levels, c.out.empty() ? std::nullopt : std::optional<std::filesystem::path>(c.out));
  std::printf("%5s %10s %6s %12s %14s %14s\n", "level", "dt", "ny", "heat", "reformulation", "good_function");
  for (const auto& r : t.rows)
    std::printf("%5d %10.4g %6d %12.4e %14.4e %14.4e\n", r.level, r.dt, r.ny, r.heat_error, r.reformulation,
                r.good_function);
  std::printf("orders: heat %.3f  reformulation %.3f  good_function %.3f  monotone %s\n", t.heat_order,
              t.reformulation_order, t.good_function_order, t.monotone ? "yes" : "no");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gevrey-class MHD boundary-layer simulator and certification harness"};
  app.require_subcommand(1);

  Common common;
  bool warn_only = false;
  std::string lemmas;
  int levels = 3;
  std::string csv, column = "E";
  double t_a = 10.0, t_b = 50.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "RNG seed (overrides the config)")->check(CLI::NonNegativeNumber);
  };
  auto* sim = app.add_subcommand("simulate", "run the solver and write the time series");
  add_common(sim);
  sim->add_flag("--warn-only", warn_only, "downgrade the alpha-chain check to a warning");
  auto* cert = app.add_subcommand("certify", "run the inequality and identity probes");
  add_common(cert);
  cert->add_option("--lemmas", lemmas, "comma-separated probe names");
  auto* conv = app.add_subcommand("converge", "residual and oracle errors under joint refinement");
  add_common(conv);
  conv->add_option("--levels", levels, "refinement levels (>= 3)");
  auto* fit = app.add_subcommand("fit-decay", "power-law exponent of a time-series column");
  fit->add_option("csv", csv, "timeseries.csv")->required()->check(CLI::ExistingFile);
  fit->add_option("--column", column, "column name");
  fit->add_option("--from", t_a, "window start");
  fit->add_option("--to", t_b, "window end");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return simulate(common, warn_only);
    if (*cert) return certify_cmd(common, lemmas);
    if (*conv) return converge_cmd(common, levels);
    if (*fit) {
      std::printf("%.6f\n", fit_decay_csv(csv, column, t_a, t_b));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
