#include "gmhd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "gmhd/errors.hpp"
#include "gmhd/weighted_norms.hpp"

namespace gmhd {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double ExperimentConfig::effective_gamma0() const {
  return gamma0 ? *gamma0 : GevreyClock(clock).gamma0();
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParameterError("bad number for " + key + ": '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParameterError("bad integer for " + key + ": '" + v + "'");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto dbl = [](double ExperimentConfig::*m) {
    return Setter([m](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.*m = to_double(k, v);
    });
  };
  auto clk = [](double ClockParams::*m) {
    return Setter([m](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.clock.*m = to_double(k, v);
    });
  };
  auto num = [](int ExperimentConfig::*m) {
    return Setter([m](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.*m = static_cast<int>(to_int(k, v));
    });
  };
  static const std::map<std::string, Setter> t{
      {"kappa", clk(&ClockParams::kappa)},
      {"epsilon", clk(&ClockParams::epsilon)},
      {"lambda", clk(&ClockParams::lambda)},
      {"delta0", clk(&ClockParams::delta0)},
      {"alpha", clk(&ClockParams::alpha)},
      {"eta", clk(&ClockParams::eta)},
      {"gamma0",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "default") c.gamma0.reset();
         else c.gamma0 = to_double(k, v);
       }},
      {"nx", num(&ExperimentConfig::nx)},
      {"ny", num(&ExperimentConfig::ny)},
      {"y_max", dbl(&ExperimentConfig::y_max)},
      {"dt", dbl(&ExperimentConfig::dt)},
      {"t_end", dbl(&ExperimentConfig::t_end)},
      {"record_cadence", num(&ExperimentConfig::record_cadence)},
      {"snapshot_cadence", num(&ExperimentConfig::snapshot_cadence)},
      {"tstar_threshold", dbl(&ExperimentConfig::tstar_threshold)},
      {"fit_t_start", dbl(&ExperimentConfig::fit_t_start)},
      {"fit_t_end", dbl(&ExperimentConfig::fit_t_end)},
      {"cert_samples", num(&ExperimentConfig::cert_samples)},
      {"seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto s = to_int(k, v);
         if (s < 0) throw ParameterError("seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"profile",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         c.profile.family = parse_profile_family(v);
       }},
      {"amplitude",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.profile.amplitude = to_double(k, v);
       }},
      {"band",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.profile.band = static_cast<int>(to_int(k, v));
       }},
      {"output_dir",
       [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
  };
  return t;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ParameterError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path.string());
  return parse_config(in);
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream o;
  auto d = [&](const char* k, double v) { o << k << " = " << format_double(v) << "\n"; };
  auto i = [&](const char* k, long long v) { o << k << " = " << v << "\n"; };
  d("kappa", c.clock.kappa);
  d("epsilon", c.clock.epsilon);
  d("lambda", c.clock.lambda);
  d("delta0", c.clock.delta0);
  d("alpha", c.clock.alpha);
  d("eta", c.clock.eta);
  if (c.gamma0) d("gamma0", *c.gamma0);
  else o << "gamma0 = default\n";
  i("nx", c.nx);
  i("ny", c.ny);
  d("y_max", c.y_max);
  d("dt", c.dt);
  d("t_end", c.t_end);
  i("record_cadence", c.record_cadence);
  i("snapshot_cadence", c.snapshot_cadence);
  d("tstar_threshold", c.tstar_threshold);
  d("fit_t_start", c.fit_t_start);
  d("fit_t_end", c.fit_t_end);
  i("cert_samples", c.cert_samples);
  i("seed", static_cast<long long>(c.seed));
  o << "profile = " << profile_family_name(c.profile.family) << "\n";
  d("amplitude", c.profile.amplitude);
  i("band", c.profile.band);
  o << "output_dir = " << c.output_dir << "\n";
  return o.str();
}

ValidationReport validate_config(const ExperimentConfig& c, bool warn_only) {
  ValidationReport r;
  const auto& p = c.clock;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) r.errors.push_back(msg);
  };
  need(p.kappa > 0.0 && p.kappa < 2.0, "kappa must lie in (0, 2)");
  need(p.alpha > 1.0, "alpha must exceed 1");
  need(p.epsilon > 0.0, "epsilon must be positive");
  need(p.lambda > 0.0, "lambda must be positive");
  need(p.delta0 > 0.0, "delta0 must be positive");
  const double l = p.kappa * (2.0 - p.kappa) / 4.0;
  need(p.eta > 0.0 && p.eta < l, "eta must lie in (0, l_kappa)");
  need(c.nx >= 8 && (c.nx & (c.nx - 1)) == 0, "nx must be a power of two >= 8");
  need(c.ny >= 4, "ny must be at least 4");
  need(c.y_max > 0.0, "y_max must be positive");
  need(c.dt > 0.0, "dt must be positive");
  need(c.t_end > 0.0, "t_end must be positive");
  need(c.record_cadence >= 1, "record_cadence must be positive");
  need(c.snapshot_cadence >= 0, "snapshot_cadence must be non-negative");
  need(c.cert_samples >= 1, "cert_samples must be positive");
  need(c.profile.amplitude >= 0.0, "amplitude must be non-negative");
  need(c.profile.band >= 1, "band must be positive");
  need(!(c.fit_t_end < c.fit_t_start), "fit window is empty");
  if (!r.ok()) return r;

  const double g0 = c.effective_gamma0();
  need(g0 > 1.0 && g0 < 1.0 + l, "gamma0 must lie in (1, 1 + l_kappa)");

  r.alpha_chain_max = 9.0 / 8.0 + l / 2.0 - p.eta / 2.0;
  r.chain_ok = p.alpha <= r.alpha_chain_max;
  if (!r.chain_ok) {
    const std::string msg = "alpha " + format_double(p.alpha) + " exceeds 9/8 + l_kappa/2 - eta/2 = " +
                            format_double(r.alpha_chain_max);
    (warn_only ? r.warnings : r.errors).push_back(msg);
  }
  const GevreyClock clock(p);
  r.theta_limit = clock.theta_limit();
  r.saturation_bound = p.delta0 / (4.0 * p.lambda);
  r.saturation_ok = clock.saturation_holds();
  need(r.saturation_ok, "theta_inf = " + format_double(r.theta_limit) + " exceeds delta0/(4 lambda) = " +
                            format_double(r.saturation_bound));
  return r;
}

// ---------------------------------------------------------------- simulate

const std::vector<std::string>& monitor_columns() {
  static const std::vector<std::string> c{"tstar_G4", "tstar_G3_y", "tstar_G3_yy", "tstar_G2_yyy",
                                          "ub_phi_7"};
  return c;
}

std::size_t SimulationResult::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ParameterError("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

namespace {

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ParameterError("cannot create " + p.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream o(p);
  if (!o) throw ParameterError("cannot write " + p.string());
  return o;
}

void write_snapshot(const fs::path& p, const MhdState& s, const AuxiliaryState& aux) {
  auto o = open_out(p);
  const Grid& g = s.grid();
  o << "# t = " << format_double(s.t()) << "\n# x y u b W\n";
  const auto u = from_spectral(s.u()), b = from_spectral(s.b()), w = from_spectral(aux.W);
  for (int j = 0; j < g.nodes(); ++j)
    for (int n = 0; n < g.nx(); ++n) {
      const std::size_t k = static_cast<std::size_t>(j) * g.nx() + n;
      o << format_double(g.x(n)) << ' ' << format_double(g.y(j)) << ' ' << format_double(u[k].real())
        << ' ' << format_double(b[k].real()) << ' ' << format_double(w[k].real()) << '\n';
    }
}

void write_plot(const fs::path& p, const std::vector<double>& x, const std::vector<double>& y) {
  auto o = open_out(p);
  for (std::size_t i = 0; i < x.size(); ++i) o << format_double(x[i]) << '\t' << format_double(y[i]) << '\n';
}

std::vector<std::pair<double, double>> series(const SimulationResult& r, const std::string& col) {
  const auto c = r.column(col);
  std::vector<std::pair<double, double>> s;
  for (const auto& row : r.rows) s.emplace_back(row[0], row[c]);
  return s;
}

double fit_or_nan(const std::vector<std::pair<double, double>>& s, double a, double b) {
  try {
    return fit_decay(s, a, b);
  } catch (const InsufficientDataError&) {
  } catch (const DomainError&) {
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double wall_ratio(const SpectralField& W) {
  const double m = W.max_abs();
  if (m == 0.0) return 0.0;
  double w0 = 0.0;
  for (const auto& c : W.row(0)) w0 = std::max(w0, std::abs(c));
  return w0 / m;
}

}  // namespace

SimulationResult run_simulate(const ExperimentConfig& cfg, const fs::path& out_dir, bool warn_only) {
  SimulationResult res;
  res.validation = validate_config(cfg, warn_only);
  if (!res.validation.ok()) {
    std::string msg = "invalid config:";
    for (const auto& e : res.validation.errors) msg += "\n  " + e;
    throw ParameterError(msg);
  }
  ensure_dir(out_dir);
  {
    auto o = open_out(out_dir / "config.txt");
    o << format_config(cfg);
  }

  const double gamma0 = cfg.effective_gamma0();
  const Grid grid(cfg.nx, cfg.ny, cfg.y_max);
  const GevreyClock clock(cfg.clock);
  StepperConfig sc;
  sc.dt = cfg.dt;
  sc.t_end = cfg.t_end;
  Integrator it(make_initial_state(grid, cfg.profile, cfg.seed, clock), sc);
  res.initial_smallness = initial_smallness(it.state(), it.aux());
  res.e0_holds = res.initial_smallness <= cfg.clock.epsilon * cfg.clock.epsilon;

  res.columns = {"t", "theta", "delta", "E", "D", "H", "B_budget", "tstar_ratio"};
  bool named = false;
  int snap = 0;
  auto record = [&](const Integrator& in) {
    const auto& s = in.state();
    auto rec = make_record(s, in.aux(), gamma0, cfg.tstar_threshold);
    if (!named) {
      for (const auto& c : rec.components) res.columns.push_back(c.name);
      for (const auto& c : monitor_columns()) res.columns.push_back(c);
      named = true;
    }
    std::vector<double> row{rec.t, rec.theta, rec.delta, rec.E, rec.D, rec.H, 0.0, rec.tstar_ratio};
    for (const auto& c : rec.components) row.push_back(c.value);
    for (double q : tstar_terms(s)) row.push_back(q);
    const double t = s.t();
    row.push_back(weighted_level_norm(s.phi(s.u()), 7.0, 1.0, t) +
                  weighted_level_norm(s.phi(s.b()), 7.0, 1.0, t));
    res.rows.push_back(std::move(row));
    auto& st = res.structure;
    st.divergence_u = std::max(st.divergence_u, divergence_residual(s.u(), s.v()));
    st.divergence_b = std::max(st.divergence_b, divergence_residual(s.b(), s.h()));
    st.wall_W = std::max(st.wall_W, wall_ratio(in.aux().W));
    if (cfg.snapshot_cadence > 0 && res.records.size() % cfg.snapshot_cadence == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%05d.txt", snap++);
      write_snapshot(out_dir / name, s, in.aux());
    }
    const bool pass = rec.tstar_pass;
    res.records.push_back(std::move(rec));
    return pass;
  };

  if (cfg.snapshot_cadence == 0) write_snapshot(out_dir / "snapshot_initial.txt", it.state(), it.aux());
  if (!record(it)) it.halt(StopReason::tstar_guard);
  long last_recorded = 0;
  it.run([&](Integrator& in) {
    if (in.steps_taken() % cfg.record_cadence != 0) return;
    last_recorded = in.steps_taken();
    if (!record(in)) in.halt(StopReason::tstar_guard);
  });
  if (it.steps_taken() != last_recorded) record(it);
  if (cfg.snapshot_cadence == 0) write_snapshot(out_dir / "snapshot_final.txt", it.state(), it.aux());

  res.stop = it.stopped();
  res.final_time = it.state().t();
  res.steps = it.steps_taken();
  res.guard_trips = (res.stop == StopReason::t_end || res.stop == StopReason::none) ? 0 : 1;

  const auto bcol = res.column("B_budget");
  if (res.records.size() >= 2) {
    res.budget = budget_monitor(res.records, cfg.clock.eta);
    for (std::size_t i = 0; i < res.rows.size(); ++i) res.rows[i][bcol] = res.budget->B[i];
  } else {
    for (auto& row : res.rows) row[bcol] = row[res.column("E")];
  }

  const double fit_b = std::min(cfg.fit_t_end, res.final_time);
  for (const auto& c : monitor_columns())
    res.fits.push_back({c, fit_or_nan(series(res, c), cfg.fit_t_start, fit_b)});

  {
    auto o = open_out(out_dir / "timeseries.csv");
    for (std::size_t i = 0; i < res.columns.size(); ++i) o << (i ? "," : "") << res.columns[i];
    o << '\n';
    for (const auto& row : res.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << format_double(row[i]);
      o << '\n';
    }
  }
  for (const char* c : {"E", "D", "H", "B_budget", "tstar_ratio"}) {
    std::vector<double> x, y;
    for (const auto& [t, v] : series(res, c)) {
      x.push_back(t);
      y.push_back(v);
    }
    write_plot(out_dir / (std::string("plot_") + c + ".dat"), x, y);
  }
  {
    auto o = open_out(out_dir / "summary.txt");
    o << "final_time = " << format_double(res.final_time) << "\n";
    o << "steps = " << res.steps << "\n";
    o << "records = " << res.records.size() << "\n";
    o << "stop_reason = " << stop_reason_name(res.stop) << "\n";
    o << "guard_trips = " << res.guard_trips << "\n";
    if (res.guard_trips) o << "last_valid_time = " << format_double(it.stop_time()) << "\n";
    o << "gamma0 = " << format_double(gamma0) << "\n";
    o << "theta_limit = " << format_double(res.validation.theta_limit) << "\n";
    o << "saturation_bound = " << format_double(res.validation.saturation_bound) << "\n";
    o << "alpha_chain_ok = " << (res.validation.chain_ok ? "true" : "false") << "\n";
    for (const auto& w : res.validation.warnings) o << "warning = " << w << "\n";
    o << "initial_smallness = " << format_double(res.initial_smallness) << "\n";
    o << "e0_holds = " << (res.e0_holds ? "true" : "false") << "\n";
    o << "budget_max_ratio = " << format_double(res.budget ? res.budget->max_ratio : 0.0) << "\n";
    o << "budget_flagged = " << (res.budget && res.budget->flagged ? "true" : "false") << "\n";
    o << "max_divergence_u = " << format_double(res.structure.divergence_u) << "\n";
    o << "max_divergence_b = " << format_double(res.structure.divergence_b) << "\n";
    o << "max_wall_W = " << format_double(res.structure.wall_W) << "\n";
    o << "fit_window = " << format_double(cfg.fit_t_start) << " " << format_double(fit_b) << "\n";
    for (const auto& f : res.fits) o << "fit_" << f.column << " = " << format_double(f.exponent) << "\n";
  }
  return res;
}

// ---------------------------------------------------------------- certify

std::vector<ProbeReport> run_certify(const ExperimentConfig& cfg, const std::vector<std::string>& lemmas,
                                     const std::optional<fs::path>& out_dir,
                                     const std::vector<GridSpec>& grids) {
  std::vector<ProbeReport> out;
  for (const auto& id : lemmas) out.push_back(certify(id, grids, cfg.cert_samples, cfg.seed));
  if (out_dir) {
    ensure_dir(*out_dir);
    auto o = open_out(*out_dir / "certify_report.txt");
    o << "# seed = " << cfg.seed << ", samples = " << cfg.cert_samples << ", grids =";
    for (const auto& g : grids) o << " (" << g.nx << "," << g.ny << "," << format_double(g.y_max) << ")";
    o << "\nlemma_id\tclass\tn_samples\tmax_ratio\tviolations\trefinement_drift\tratio_per_grid\tstatus\n";
    for (const auto& r : out) {
      o << r.lemma_id << '\t' << (r.exact ? "exact" : "bound") << '\t' << r.n_samples << '\t'
        << format_double(r.max_ratio) << '\t' << r.violations << '\t' << format_double(r.refinement_drift)
        << '\t';
      for (std::size_t i = 0; i < r.ratio_per_grid.size(); ++i)
        o << (i ? ";" : "") << format_double(r.ratio_per_grid[i]);
      o << '\t' << (r.passed() ? "PASS" : "FAIL") << '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------- converge

double fitted_order(const std::vector<double>& v) {
  if (v.size() < 2) throw InsufficientDataError("order fit needs at least two levels");
  const double n = static_cast<double>(v.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw DomainError("order fit needs positive values");
    const double x = static_cast<double>(i), y = std::log2(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

double interior_max(const SpectralField& f) {
  double m = 0.0;
  for (int j = 2; j < f.grid().ny() - 1; ++j)
    for (const auto& c : f.row(j)) m = std::max(m, std::abs(c));
  return m;
}

double heat_error(int level) {
  const double L = 3.0, t_end = 1.0;
  const Grid g(8, 32 << level, L);
  auto u0 = sample_field(g, [&](double, double y) { return std::sin(std::numbers::pi * y / L); });
  StepperConfig sc;
  sc.dt = 0.1 / (1 << level);
  sc.t_end = t_end;
  ClockParams p;
  Integrator it(MhdState(u0, SpectralField(g), GevreyClock(p)), sc);
  it.run([](const Integrator&) {});
  if (it.stopped() != StopReason::t_end) throw NumericError("heat oracle run stopped early");
  const double mu = std::pow(std::numbers::pi / L, 2);
  return (it.state().u() - std::exp(-mu * t_end) * u0).max_abs();
}

std::pair<double, double> trajectory_residuals(const ClockParams& p, int level) {
  const double dt = 0.02 / (1 << level);
  const Grid g(16, 48 << level, 6.0);
  auto u0 = sample_field(g, [](double x, double y) { return 0.2 * std::sin(x) * y * std::exp(-y * y); });
  auto b0 = sample_field(g, [](double x, double y) { return 0.2 * std::cos(x) * y * y * std::exp(-y * y); });
  StepperConfig sc;
  sc.dt = dt;
  sc.t_end = 1.0;
  Integrator it(MhdState(u0, b0, GevreyClock(p)), sc);
  const int n_mid = static_cast<int>(std::lround(0.2 / dt));
  std::optional<MhdState> before, mid;
  std::optional<AuxiliaryState> aux_before, aux_mid;
  for (int n = 0; n <= n_mid; ++n) {
    if (n == n_mid - 1) {
      before = it.state();
      aux_before = it.aux();
    }
    if (n == n_mid) {
      mid = it.state();
      aux_mid = it.aux();
    }
    if (!it.step()) throw NumericError("residual run stopped: " + stop_reason_name(it.stopped()));
  }
  const auto& after = it.state();
  const double c = 1.0 / (2.0 * dt);
  const Tendencies tend{c * (after.u() - before->u()), c * (after.b() - before->b()),
                        c * (it.aux().W - aux_before->W)};
  const auto r = reformulation_residual(*mid, *aux_mid, tend);
  const double reform = std::max({interior_max(r.u_eq), interior_max(r.b_eq), interior_max(r.u2_eq)});
  const auto gfe = good_function_residual(*mid, c * (after.G() - before->G()));
  const auto gfe_t = good_function_residual_tilde(*mid, c * (after.G_tilde() - before->G_tilde()));
  return {reform, std::max(interior_max(gfe), interior_max(gfe_t))};
}

}  // namespace

ConvergenceTable run_converge(const ExperimentConfig& cfg, int levels, const std::optional<fs::path>& out_dir) {
  if (levels < 3) throw ParameterError("convergence needs at least 3 levels");
  const auto v = validate_config(cfg, true);
  if (!v.ok()) throw ParameterError("invalid config: " + v.errors.front());
  ConvergenceTable t;
  std::vector<double> heat, reform, gfe;
  for (int l = 0; l < levels; ++l) {
    ConvergenceRow row;
    row.level = l;
    row.dt = 0.02 / (1 << l);
    row.ny = 48 << l;
    row.heat_error = heat_error(l);
    std::tie(row.reformulation, row.good_function) = trajectory_residuals(cfg.clock, l);
    heat.push_back(row.heat_error);
    reform.push_back(row.reformulation);
    gfe.push_back(row.good_function);
    t.rows.push_back(row);
  }
  t.heat_order = fitted_order(heat);
  t.reformulation_order = fitted_order(reform);
  t.good_function_order = fitted_order(gfe);
  auto decreasing = [](const std::vector<double>& s) {
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!(s[i] < s[i - 1])) return false;
    return true;
  };
  t.monotone = decreasing(heat) && decreasing(reform) && decreasing(gfe);

  if (out_dir) {
    ensure_dir(*out_dir);
    auto o = open_out(*out_dir / "converge_table.txt");
    o << "# trajectory runs: nx = 16, y_max = 6; heat oracle: dt = 0.1/2^level, ny = 32*2^level, y_max = 3\n";
    o << "level\tdt\tny\theat_error\treformulation\tgood_function\n";
    for (const auto& r : t.rows)
      o << r.level << '\t' << format_double(r.dt) << '\t' << r.ny << '\t' << format_double(r.heat_error)
        << '\t' << format_double(r.reformulation) << '\t' << format_double(r.good_function) << '\n';
    o << "# order heat = " << format_double(t.heat_order) << "\n";
    o << "# order reformulation = " << format_double(t.reformulation_order) << "\n";
    o << "# order good_function = " << format_double(t.good_function_order) << "\n";
    o << "# monotone = " << (t.monotone ? "true" : "false") << "\n";
    std::vector<double> dts;
    for (const auto& r : t.rows) dts.push_back(r.dt);
    write_plot(*out_dir / "plot_heat_error.dat", dts, heat);
    write_plot(*out_dir / "plot_reformulation.dat", dts, reform);
    write_plot(*out_dir / "plot_good_function.dat", dts, gfe);
  }
  return t;
}

// ---------------------------------------------------------------- fit-decay

double fit_decay_csv(const fs::path& csv, const std::string& column, double t_a, double t_b) {
  std::ifstream in(csv);
  if (!in) throw ParameterError("cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw InsufficientDataError("empty csv " + csv.string());
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(trim(cell));
  }
  const auto ti = std::find(header.begin(), header.end(), "t");
  const auto ci = std::find(header.begin(), header.end(), column);
  if (ti == header.end()) throw ParameterError("csv has no 't' column");
  if (ci == header.end()) throw ParameterError("csv has no column '" + column + "'");
  const auto tcol = static_cast<std::size_t>(ti - header.begin());
  const auto vcol = static_cast<std::size_t>(ci - header.begin());
  std::vector<std::pair<double, double>> s;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != header.size()) throw ParameterError("ragged csv row in " + csv.string());
    s.emplace_back(to_double("t", cells[tcol]), to_double(column, cells[vcol]));
  }
  return fit_decay(s, t_a, t_b);
}

}  // namespace gmhd
