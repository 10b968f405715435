#include "quasisol/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "app.hpp"
#include "quasisol/bifurcation.hpp"
#include "quasisol/cli/io.hpp"
#include "quasisol/cli/presets.hpp"
#include "quasisol/evolve1d.hpp"
#include "quasisol/evolver.hpp"
#include "quasisol/groundstate.hpp"

namespace quasisol::cli {

namespace {

std::string fmt(double v, int digits = 10) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int int_key(const RunDescription& d, const std::string& key) {
  const long v = d.integer(key);
  require(v >= -2147483647L && v <= 2147483647L, ErrorCode::usage_error, "key '" + key + "' out of range");
  return static_cast<int>(v);
}

json config_echo(const RunDescription& d) {
  json echo = {{"command", d.command}};
  for (const auto& [k, v] : d.values) echo[k] = v;
  return echo;
}

// Typed views of the descriptions. Each builder checks the module
// preconditions so that validate() can run them without side effects.

struct GroundstateJob {
  ModelParams params;
  GridSpec grid;
  SolverControls controls;
  bool continuation;
};

GroundstateJob groundstate_job(const RunDescription& d) {
  GroundstateJob job{{int_key(d, "alpha"), int_key(d, "dim"), d.number("omega")},
                     {int_key(d, "n"), d.number("s0")},
                     {},
                     d.flag("continuation")};
  job.controls.mu = d.number("mu");
  job.controls.mu_growth = d.number("mu_growth");
  job.controls.tol = d.number("tol");
  job.controls.max_iter = int_key(d, "max_iter");
  require(job.params.dim >= 2, ErrorCode::usage_error, "key 'dim': groundstate needs dim >= 2 (use mass1d for d = 1)");
  job.params.require_solitary_range();
  require(job.grid.n >= 2 && job.grid.s0 > 0.0, ErrorCode::usage_error, "keys 'n'/'s0': need n >= 2 and s0 > 0");
  job.controls.validate();
  return job;
}

struct SweepJob {
  int alpha;
  int dim;
  std::vector<double> omegas;
  RadialSweepOptions options;
  std::string fit;
  bool profiles;
};

std::vector<double> sweep_grid(const RunDescription& d, int alpha) {
  if (!d.text("omegas").empty()) {
    auto list = d.numbers("omegas");
    std::sort(list.begin(), list.end());
    return list;
  }
  require(!d.text("omega_min").empty(), ErrorCode::usage_error, "missing required key 'omega_min' (or 'omegas')");
  require(!d.text("omega_max").empty(), ErrorCode::usage_error, "missing required key 'omega_max' (or 'omegas')");
  const double lo = d.number("omega_min");
  const double hi = d.number("omega_max");
  const long points = d.integer("points");
  if (points < 1 || hi < lo) return {};
  require(points > 1 || lo == hi, ErrorCode::usage_error, "key 'points': need >= 2 points for a range");
  const std::string spacing = d.text("spacing");
  std::vector<double> out;
  const double star = omega_star(alpha);
  for (long i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    if (spacing == "linear") {
      out.push_back(lo + t * (hi - lo));
    } else if (spacing == "log") {
      require(lo > 0.0, ErrorCode::usage_error, "key 'omega_min': log spacing needs omega_min > 0");
      out.push_back(lo * std::pow(hi / lo, t));
    } else if (spacing == "log-star") {
      require(hi < star, ErrorCode::usage_error, "key 'omega_max': log-star spacing needs omega_max < omega*");
      const double g_lo = star - hi;
      const double g_hi = star - lo;
      out.push_back(star - g_hi * std::pow(g_lo / g_hi, t));
    } else {
      fail(ErrorCode::usage_error, "key 'spacing': expected linear, log or log-star, got '" + spacing + "'");
    }
  }
  return out;
}

SweepJob sweep_job(const RunDescription& d) {
  SweepJob job;
  job.alpha = int_key(d, "alpha");
  job.dim = int_key(d, "dim");
  require(job.alpha >= 1, ErrorCode::usage_error, "key 'alpha': must be >= 1");
  require(job.dim >= 1, ErrorCode::usage_error, "key 'dim': must be >= 1");
  job.omegas = sweep_grid(d, job.alpha);
  require(!job.omegas.empty(), ErrorCode::usage_error, "empty omega grid");
  const double star = omega_star(job.alpha);
  for (double w : job.omegas) {
    require(w > 0.0 && w < star, ErrorCode::usage_error,
            "omega = " + fmt(w) + " outside (0, omega* = " + fmt(star) + ")");
  }
  job.options.grid = {int_key(d, "n"), d.number("s0")};
  require(job.options.grid.n >= 2 && job.options.grid.s0 > 0.0, ErrorCode::usage_error,
          "keys 'n'/'s0': need n >= 2 and s0 > 0");
  job.options.controls.mu = d.number("mu");
  job.options.controls.mu_growth = d.number("mu_growth");
  job.options.controls.tol = d.number("tol");
  job.options.controls.max_iter = int_key(d, "max_iter");
  job.options.controls.validate();
  job.fit = d.text("fit");
  require(job.fit == "none" || job.fit == "star" || job.fit == "zero", ErrorCode::usage_error,
          "key 'fit': expected none, star or zero");
  job.profiles = d.flag("profiles");
  return job;
}

Run1DConfig evolve1d_job(const RunDescription& d) {
  Run1DConfig c;
  c.alpha = int_key(d, "alpha");
  c.omega = d.number("omega");
  c.lambda = d.number("lambda");
  c.lx = d.number("lx");
  c.nx = int_key(d, "nx");
  c.tmax = d.number("tmax");
  c.nt = d.integer("nt");
  c.diag_stride = d.integer("diag_stride");
  c.snapshot_stride = d.integer("snapshot_stride");
  c.delta_bound = d.number("delta_bound");
  c.validate();
  const ModelParams params{c.alpha, 1, c.omega};
  params.require_solitary_range();
  require(c.nx >= 4 && (c.nx & (c.nx - 1)) == 0, ErrorCode::usage_error, "key 'nx': must be a power of two >= 4");
  require(c.lambda > 0.0 && c.lambda * soliton_max(params) < 1.0, ErrorCode::usage_error,
          "key 'lambda': lambda * soliton peak must lie in (0, 1)");
  return c;
}

RunRadialConfig evolver_job(const RunDescription& d) {
  RunRadialConfig c;
  c.alpha = int_key(d, "alpha");
  c.dim = int_key(d, "dim");
  c.grid = {int_key(d, "n"), d.number("s0")};
  const double tmax = d.number("tmax");
  c.nt = d.integer("nt");
  require(tmax > 0.0 && c.nt >= 1, ErrorCode::usage_error, "keys 'tmax'/'nt': need tmax > 0 and nt >= 1");
  c.h = tmax / static_cast<double>(c.nt);
  c.newton_tol = d.number("newton_tol");
  c.newton_max_iter = int_key(d, "newton_max_iter");
  c.diag_stride = d.integer("diag_stride");
  c.snapshot_stride = d.integer("snapshot_stride");
  c.delta_bound = d.number("delta_bound");
  const std::string initial = d.text("initial");
  if (initial == "soliton") {
    c.initial = SolitonInitial{d.number("omega"), d.number("lambda")};
    ModelParams{c.alpha, c.dim, d.number("omega")}.require_solitary_range();
    require(d.number("lambda") > 0.0, ErrorCode::usage_error, "key 'lambda': must be positive");
  } else if (initial == "gaussian") {
    c.initial = GaussianInitial{d.number("c"), d.number("s1")};
    require(d.number("c") > 0.0 && d.number("c") < 1.0, ErrorCode::usage_error, "key 'c': must lie in (0, 1)");
    require(d.number("s1") > 0.0, ErrorCode::usage_error, "key 's1': must be positive");
  } else {
    fail(ErrorCode::usage_error, "key 'initial': expected soliton or gaussian, got '" + initial + "'");
  }
  c.validate();
  return c;
}

Outcome run_groundstate(const RunDescription& d, const fs::path& out) {
  const auto job = groundstate_job(d);
  auto grid = std::make_shared<const ChebGrid>(job.grid.n, job.grid.s0);
  const GroundState gs = job.continuation ? groundstate_by_continuation(job.params, grid, job.controls)
                                          : newton_relaxed(default_seed(grid), job.params, job.controls);
  const double peak = gs.profile.values.maxCoeff();
  const double mass = mass_radial(gs.profile, job.params);
  const double energy = energy_radial(gs.profile, job.params);
  write_profile(out / "groundstate.csv", gs.profile);
  write_json(out / "groundstate.json",
             {{"config", config_echo(d)},
              {"alpha", job.params.alpha},
              {"dim", job.params.dim},
              {"omega", job.params.omega},
              {"n", job.grid.n},
              {"s0", job.grid.s0},
              {"peak", peak},
              {"one_minus_peak", 1.0 - peak},
              {"residual", gs.info.residual},
              {"iterations", gs.info.iterations},
              {"trailing_coefficient", gs.info.trailing},
              {"leading_coefficient", gs.info.leading},
              {"stationary_identity", stationary_residual_identity(gs.profile, job.params)},
              {"mass", mass},
              {"energy", energy}});
  return {exit_ok, "groundstate: omega=" + fmt(job.params.omega) + " peak=" + fmt(peak, 15) +
                       " residual=" + fmt(gs.info.residual, 3) + " mass=" + fmt(mass) + " energy=" + fmt(energy) +
                       " -> " + (out / "groundstate.csv").string()};
}

// |psi_0|^2 of the semilinear ground state, the omega -> 0 prefactor of the
// mass; empty when the semilinear problem is supercritical or does not converge.
std::optional<double> semilinear_reference(int alpha, int dim) {
  if (dim > 2 && alpha * (dim - 2) >= 2) return std::nullopt;
  try {
    auto grid = std::make_shared<const ChebGrid>(200, 400.0);
    const auto gs = semilinear_groundstate({alpha, dim, 1.0}, {.mu = 0.2, .tol = 1e-10, .mu_growth = 2.0}, grid);
    return semilinear_mass(gs.profile, dim);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Outcome run_sweep(const RunDescription& d, const fs::path& out) {
  const auto job = sweep_job(d);
  std::vector<BifurcationPoint> points;
  json meta = {{"config", config_echo(d)}, {"alpha", job.alpha}, {"dim", job.dim}};
  int code = exit_ok;
  std::string failure;
  if (job.dim == 1) {
    points = sweep_1d(job.alpha, job.omegas);
  } else {
    auto result = sweep_radial(job.alpha, job.dim, job.omegas, job.options);
    points = std::move(result.points);
    if (result.failed_omega) {
      code = exit_solver;
      failure = result.failure_message;
      meta["failed_omega"] = *result.failed_omega;
      meta["failure"] = failure;
    }
    if (job.profiles) {
      for (const auto& gs : result.states) {
        char name[64];
        std::snprintf(name, sizeof name, "profile_omega_%.6f.csv", gs.profile.omega);
        write_profile(out / "profiles" / name, gs.profile);
      }
    }
  }
  write_bifurcation(out / "bifurcation.csv", points);

  meta["omega_c"] = nullptr;
  try {
    const double wc = find_omega_c(points);
    meta["omega_c"] = wc;
    if (job.dim == 1) {
      // Refine inside the bracketing grid cell.
      auto it = std::lower_bound(points.begin(), points.end(), wc,
                                 [](const BifurcationPoint& p, double w) { return p.omega < w; });
      const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - points.begin()) + 1,
                                                   points.size() - 1);
      const std::size_t lo = hi >= 3 ? hi - 3 : 0;
      meta["omega_c"] = find_omega_c_1d(job.alpha, points[lo].omega, points[hi].omega);
    }
  } catch (const Error& e) {
    meta["omega_c_note"] = e.what();
  }
  const auto cusp = energy_mass_cusp(points);
  meta["cusp"] = {{"non_functional", cusp.non_functional},
                  {"mass_min", cusp.mass_min},
                  {"omega_at_min", cusp.omega_at_min},
                  {"max_energy_gap", cusp.max_energy_gap}};
  meta["fits"] = json::array();
  std::string fit_summary;
  if (job.fit != "none" && !points.empty()) {
    try {
      std::optional<double> reference;
      if (job.fit == "zero" && job.dim >= 2) {
        reference = semilinear_reference(job.alpha, job.dim);
        if (reference) meta["semilinear"] = {{"mass", *reference}, {"norm", std::sqrt(*reference)}};
      }
      const AsymptoteFit fit = job.fit == "star" ? fit_asymptote_star(points, job.alpha, job.dim)
                                                 : fit_asymptote_zero(points, job.alpha, job.dim, reference);
      meta["fits"].push_back(to_json(fit));
      fit_summary = job.dim == 1 && job.fit == "star" ? " slope=" + fmt(fit.coefficient, 6)
                                                       : " exponent=" + fmt(fit.exponent, 6);
    } catch (const Error& e) {
      meta["fit_error"] = e.what();
      code = std::max(code, static_cast<int>(exit_solver));
      failure = e.what();
    }
  }
  write_json(out / "bifurcation.json", meta);
  std::string summary = "sweep: alpha=" + std::to_string(job.alpha) + " dim=" + std::to_string(job.dim) +
                        " points=" + std::to_string(points.size());
  if (meta["omega_c"].is_number()) summary += " omega_c=" + fmt(meta["omega_c"].get<double>());
  summary += fit_summary;
  if (!failure.empty()) summary += " FAILED: " + failure;
  return {code, summary + " -> " + (out / "bifurcation.csv").string()};
}

Outcome run_mass1d(const RunDescription& d, const fs::path& out) {
  const int alpha = int_key(d, "alpha");
  const double omega = d.number("omega");
  const double mass = mass_1d_reduced(alpha, omega);
  const double slope = mass_1d_reduced_slope(alpha, omega);
  const double energy = energy_1d_closed(alpha, omega);
  write_json(out / "mass1d.json", {{"alpha", alpha}, {"omega", omega}, {"mass", mass}, {"dmass_domega", slope},
                                   {"energy", energy}, {"peak", soliton_max({alpha, 1, omega})}});
  return {exit_ok, "mass1d: alpha=" + std::to_string(alpha) + " omega=" + fmt(omega) + " mass=" + fmt(mass, 15) +
                       " dmass_domega=" + fmt(slope) + " energy=" + fmt(energy, 15)};
}

int status_code(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return exit_ok;
    case RunStatus::accuracy_abort: return exit_accuracy;
    case RunStatus::solver_failure: return exit_solver;
  }
  return exit_solver;
}

std::string run_tail(RunStatus status, const std::string& message) {
  return status == RunStatus::completed ? std::string() : " " + std::string(to_string(status)) + ": " + message;
}

Outcome run_evolve1d(const RunDescription& d, const fs::path& out) {
  const auto config = evolve1d_job(d);
  const auto result = evolve_1d(config);
  const auto& diag = result.diagnostics;
  write_diagnostics(out / "diagnostics.csv", diag);
  write_field(out / "final.csv", result.final_state);
  json manifest = {{"config", config_echo(d)},
                   {"status", std::string(to_string(result.status))},
                   {"message", result.message},
                   {"final_time", result.final_time},
                   {"max_delta", diag.max_delta()},
                   {"max_mass_drift", diag.max_mass_drift()},
                   {"max_tail_ratio", result.max_tail_ratio},
                   {"reentry_note", "radiation re-enters through the periodic boundary; no re-entry time is computed"},
                   {"snapshots", write_snapshots(out / "snapshots", result.snapshots, *result.final_state.grid)}};
  std::string fit_text;
  try {
    const FinalFit fit = fit_final_omega(diag, config.alpha);
    manifest["fit"] = {{"omega", fit.omega}, {"mean_linf", fit.mean_linf}, {"window", {fit.window_lo, fit.window_hi}},
                       {"samples", fit.samples}};
    const ModelParams fitted{config.alpha, 1, fit.omega};
    std::vector<double> phi;
    for (double x : result.final_state.grid->x_nodes()) phi.push_back(soliton_1d(fitted, x));
    write_profile_1d(out / "fitted_profile.csv", result.final_state.grid->x_nodes(), phi);
    fit_text = " fitted_omega=" + fmt(fit.omega, 6);
  } catch (const Error& e) {
    manifest["fit_note"] = e.what();
  }
  write_json(out / "manifest.json", manifest);
  const double linf = diag.linf.empty() ? 0.0 : diag.linf.back();
  return {status_code(result.status), "evolve1d: t=" + fmt(result.final_time, 6) + " linf=" + fmt(linf) + fit_text +
                                          " max_delta=" + fmt(diag.max_delta(), 3) +
                                          run_tail(result.status, result.message)};
}

Outcome run_evolver(const RunDescription& d, const fs::path& out) {
  const auto config = evolver_job(d);
  const auto result = evolve_radial(config);
  const auto& diag = result.diagnostics;
  write_diagnostics(out / "diagnostics.csv", diag);
  write_field(out / "final.csv", result.final_state);
  write_json(out / "manifest.json",
             {{"config", config_echo(d)},
              {"status", std::string(to_string(result.status))},
              {"message", result.message},
              {"final_time", result.final_time},
              {"max_delta", diag.max_delta()},
              {"max_mass_drift", diag.max_mass_drift()},
              {"max_cn_residual", result.max_cn_residual},
              {"newton_iterations", result.newton_iterations},
              {"factorizations", result.factorizations},
              {"max_trailing_ratio", result.max_trailing_ratio},
              {"snapshots", write_snapshots(out / "snapshots", result.snapshots, *result.final_state.grid)}});
  const double linf = diag.linf.empty() ? 0.0 : diag.linf.back();
  return {status_code(result.status), "evolver: t=" + fmt(result.final_time, 6) + " linf=" + fmt(linf) +
                                          " max_delta=" + fmt(diag.max_delta(), 3) +
                                          run_tail(result.status, result.message)};
}

Outcome run_fit(const RunDescription& d, const fs::path& out) {
  const int alpha = int_key(d, "alpha");
  const FinalFit fit = fit_report(d.text("diagnostics"), alpha);
  write_json(out / "fit.json", {{"diagnostics", d.text("diagnostics")},
                                {"alpha", alpha},
                                {"omega", fit.omega},
                                {"mean_linf", fit.mean_linf},
                                {"window", {fit.window_lo, fit.window_hi}},
                                {"samples", fit.samples}});
  return {exit_ok, "fit: omega=" + fmt(fit.omega, 8) + " mean_linf=" + fmt(fit.mean_linf) + " window=[" +
                       fmt(fit.window_lo, 6) + ", " + fmt(fit.window_hi, 6) + "] samples=" +
                       std::to_string(fit.samples)};
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage_error:
    case ErrorCode::invalid_parameter:
    case ErrorCode::no_solitary_wave:
    case ErrorCode::saturation_violation:
      return exit_usage;
    case ErrorCode::accuracy_abort:
      return exit_accuracy;
    default:
      return exit_solver;
  }
}

void validate(const RunDescription& d) {
  try {
    if (d.command == "groundstate") {
      groundstate_job(d);
    } else if (d.command == "sweep") {
      sweep_job(d);
    } else if (d.command == "mass1d") {
      ModelParams{int_key(d, "alpha"), 1, d.number("omega")}.require_solitary_range();
    } else if (d.command == "evolve1d") {
      evolve1d_job(d);
    } else if (d.command == "evolver") {
      evolver_job(d);
    } else if (d.command == "fit") {
      require(int_key(d, "alpha") >= 1, ErrorCode::usage_error, "key 'alpha': must be >= 1");
      require(!d.text("diagnostics").empty(), ErrorCode::usage_error, "key 'diagnostics': path is empty");
    } else {
      fail(ErrorCode::usage_error, "unknown command '" + d.command + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::usage_error) throw;
    fail(ErrorCode::usage_error, e.what());
  }
}

FinalFit fit_report(const std::filesystem::path& diagnostics_csv, int alpha) {
  const auto table = read_csv(diagnostics_csv);
  return fit_final_omega(table.numeric("t"), table.numeric("linf"), alpha);
}

Outcome run(const RunDescription& d, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (d.command == "groundstate") return run_groundstate(d, out_dir);
  if (d.command == "sweep") return run_sweep(d, out_dir);
  if (d.command == "mass1d") return run_mass1d(d, out_dir);
  if (d.command == "evolve1d") return run_evolve1d(d, out_dir);
  if (d.command == "evolver") return run_evolver(d, out_dir);
  if (d.command == "fit") return run_fit(d, out_dir);
  fail(ErrorCode::usage_error, "unknown command '" + d.command + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  AppState state;
  auto app = make_app(state);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app->exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  RunDescription description;
  try {
    if (state.selected == "preset") {
      if (state.list) {
        for (const auto& p : presets()) out << p.name << "  [" << p.command << "]  " << p.description << '\n';
        return exit_ok;
      }
      require(!state.preset_name.empty(), ErrorCode::usage_error, "preset: missing preset name (see --list)");
      description = preset_description(find_preset(state.preset_name), state.desk, state.preset_out);
    } else {
      description = description_from_state(state);
      validate(description);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  const auto out_dir = output_directory(description);
  try {
    const Outcome outcome = run(description, out_dir);
    out << outcome.summary << '\n';
    return outcome.exit_code;
  } catch (const Error& e) {
    err << description.command << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << description.command << ": " << e.what() << '\n';
    return exit_solver;
  }
}

std::unique_ptr<CLI::App> make_app(AppState& state) {
  auto app = std::make_unique<CLI::App>("quasi-linear Schroedinger solver suite", "quasisol");
  app->require_subcommand(1);
  for (const auto& spec : command_specs()) {
    auto* sub = app->add_subcommand(spec.name, spec.description);
    sub->add_option("--config", state.config_path, "config file: key = value lines or a JSON object");
    for (const auto& key : spec.keys) {
      const std::string help = key.default_value ? key.help + " [default: " +
                                                       (key.default_value->empty() ? "unset" : *key.default_value) + "]"
                                                 : key.help + " [required]";
      state.options[spec.name][key.name] = sub->add_option("--" + key.name, state.storage[spec.name][key.name], help);
    }
    const std::string name = spec.name;
    sub->callback([&state, name] { state.selected = name; });
  }
  auto* preset = app->add_subcommand("preset", "run a named experiment preset");
  preset->add_option("name", state.preset_name, "preset name");
  preset->add_flag("--desk", state.desk, "use the reduced desk-scale resolution");
  preset->add_flag("--list", state.list, "list presets and exit");
  preset->add_option("--out", state.preset_out, "output directory (overrides $QUASISOL_OUT)");
  preset->callback([&state] { state.selected = "preset"; });
  return app;
}

}  // namespace quasisol::cli
