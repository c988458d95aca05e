#include "dezin/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dezin/forward.hpp"
#include "dezin/inverse.hpp"
#include "dezin/kernels.hpp"
#include "dezin/report.hpp"
#include "dezin/selftest.hpp"

namespace dezin {

namespace {

namespace fs = std::filesystem;

// Everything is rendered in memory first so a failed run leaves no partial file.
void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

TimeFunction g_of(const RunConfig& cfg) {
  return cfg.g ? make_time_function(*cfg.g, cfg.base_dir) : TimeFunction::constant(1.0);
}

SpectralField field_of(const nlohmann::json& spec, const RunConfig& cfg, std::shared_ptr<const ModeSet> ms) {
  return make_spatial_field(spec, std::move(ms), cfg.base_dir, cfg.projection);
}

ForwardOptions forward_options(const RunConfig& cfg) {
  ForwardOptions o;
  o.free_coefficients = cfg.free_coefficients;
  o.orth_rel_tol = cfg.orth_rel_tol;
  o.quad = cfg.quad;
  o.ml = cfg.ml;
  return o;
}

void write_status(ReportWriter& w, const char* status, const std::vector<int>& offending, const std::string& msg) {
  w.section("status");
  w.put("result", status);
  if (!offending.empty()) w.put("offending_indices", offending);
  if (!msg.empty()) w.put("message", msg);
}

struct Outputs {
  std::ostringstream report, residuals, u, f, ml;
  bool has_residuals = false, has_u = false, has_f = false, has_ml = false;
};

int flush(const Outputs& o, const fs::path& dir, std::ostream& log, bool quiet) {
  fs::create_directories(dir);
  write_file(dir / "report.txt", o.report.str());
  if (o.has_residuals) write_file(dir / "residuals.txt", o.residuals.str());
  if (o.has_u) write_file(dir / "u.csv", o.u.str());
  if (o.has_f) write_file(dir / "f.csv", o.f.str());
  if (o.has_ml) write_file(dir / "ml.csv", o.ml.str());
  if (!quiet) log << "wrote " << (dir / "report.txt").string() << '\n';
  return exit_ok;
}

int run_forward(const RunConfig& cfg, Outputs& o, std::ostream& log, bool quiet) {
  if (!cfg.f) throw ConfigError("forward mode needs functions.f");
  auto ms = make_mode_set(cfg.domain, cfg.problem.mode_count);
  const SpectralField f = field_of(*cfg.f, cfg, ms);
  const TimeFunction g = g_of(cfg);
  ReportWriter w(o.report);
  w.put("mode", "forward");
  write_params(w, cfg.problem, *ms);
  write_solvability(w, analyze_solvability(cfg.problem, *ms));
  ForwardSolution sol;
  try {
    sol = solve_forward(cfg.problem, ms, SourceTerm::separable(f, g), forward_options(cfg));
  } catch (const NoSolution& e) {
    write_status(w, "no_solution", e.indices(), e.what());
    if (!quiet) log << e.what() << '\n';
    return exit_no_solution;
  }
  write_forward(w, sol);
  write_status(w, "ok", {}, "");
  if (!quiet) log << "forward: " << ms->size() << " modes solved\n";

  ReportWriter r(o.residuals);
  write_conditions(r, check_conditions(sol));
  o.has_residuals = true;
  if (cfg.grid.write_csv) {
    write_u_csv(o.u, sol, cfg.grid.x_points, cfg.grid.t_points);
    o.has_u = true;
  }
  return exit_ok;
}

SpectralField phi0_of(const RunConfig& cfg, std::shared_ptr<const ModeSet> ms, const TimeFunction& g) {
  if (!cfg.phi0) throw ConfigError("inverse mode needs functions.phi0");
  const auto& spec = *cfg.phi0;
  if (spec.is_object() && spec.contains("type") && spec.at("type") == "forward_solution") {
    // Manufactured datum: phi0 = u(., t0) of the forward problem with the given f.
    for (auto it = spec.begin(); it != spec.end(); ++it)
      if (it.key() != "type" && it.key() != "f") throw ConfigError("phi0: unknown key '" + it.key() + "'");
    if (!spec.contains("f")) throw ConfigError("phi0: forward_solution needs 'f'");
    const SpectralField f = field_of(spec.at("f"), cfg, ms);
    ForwardOptions fo;
    fo.quad = cfg.quad;
    fo.ml = cfg.ml;
    const ForwardSolution u = solve_forward(cfg.problem, ms, SourceTerm::separable(f, g), fo);
    SpectralField phi = SpectralField::zero(ms);
    phi.coeffs = mode_values(u, *cfg.t0);
    return phi;
  }
  return field_of(spec, cfg, ms);
}

int run_inverse(const RunConfig& cfg, Outputs& o, std::ostream& log, bool quiet) {
  if (!cfg.g) throw ConfigError("inverse mode needs functions.g");
  if (!cfg.t0) throw ConfigError("inverse mode needs problem.t0");
  auto ms = make_mode_set(cfg.domain, cfg.problem.mode_count);
  const TimeFunction g = g_of(cfg);
  InverseProblem prob{cfg.problem, g, *cfg.t0, phi0_of(cfg, ms, g), cfg.c0, cfg.orth_rel_tol};
  InverseOptions io;
  io.free_f = cfg.free_coefficients;
  io.quad = cfg.quad;
  io.ml = cfg.ml;

  ReportWriter w(o.report);
  w.put("mode", "inverse");
  write_params(w, cfg.problem, *ms);
  w.put("t0", prob.t0);
  write_solvability(w, analyze_solvability(cfg.problem, *ms));
  InverseSolution sol;
  try {
    sol = solve_inverse(prob, ms, io);
  } catch (const NoSolution& e) {
    const DenominatorReport rep = compute_denominators(prob, *ms, io.quad, io.ml);
    write_denominators(w, rep);
    write_bounds(w, bound_diagnostics(rep, *ms, cfg.problem.lambda));
    write_status(w, "no_solution", e.indices(), e.what());
    if (!quiet) log << e.what() << '\n';
    return exit_no_solution;
  }
  write_denominators(w, sol.report);
  write_bounds(w, bound_diagnostics(sol.report, *ms, cfg.problem.lambda));
  w.section("inverse");
  w.put("phi0", prob.phi0.coeffs);
  w.put("f", sol.f.coeffs);
  w.put("free_indices", sol.free_indices);
  w.put("warnings", sol.warnings);
  write_forward(w, sol.u);
  write_status(w, "ok", {}, "");
  if (!quiet) log << "inverse: recovered " << ms->size() << " coefficients of f\n";

  ReportWriter r(o.residuals);
  write_conditions(r, check_conditions(sol.u));
  r.section("overdetermination");
  r.put("max_abs", verify_overdetermination(sol, prob));
  o.has_residuals = true;
  write_field_csv(o.f, sol.f, cfg.grid.x_points);
  o.has_f = true;
  if (cfg.grid.write_csv) {
    write_u_csv(o.u, sol.u, cfg.grid.x_points, cfg.grid.t_points);
    o.has_u = true;
  }
  return exit_ok;
}

int run_analyze(const RunConfig& cfg, Outputs& o, std::ostream& log, bool quiet) {
  auto ms = make_mode_set(cfg.domain, cfg.problem.mode_count);
  const SolvabilityReport sr = analyze_solvability(cfg.problem, *ms);
  ReportWriter w(o.report);
  w.put("mode", "analyze");
  write_params(w, cfg.problem, *ms);
  write_solvability(w, sr);
  if (cfg.t0) {
    // Denominators need a sign-definite g; a missing g means g = 1.
    InverseProblem prob{cfg.problem, g_of(cfg), *cfg.t0, SpectralField::zero(ms), cfg.c0, cfg.orth_rel_tol};
    w.put("t0", prob.t0);
    const DenominatorReport rep = compute_denominators(prob, *ms, cfg.quad, cfg.ml);
    write_denominators(w, rep);
    write_bounds(w, bound_diagnostics(rep, *ms, cfg.problem.lambda));
  }
  write_status(w, "ok", {}, "");
  if (!quiet) {
    log << "analyze: lambda class " << to_string(sr.lambda_class) << ", resonant modes:";
    for (int k : sr.resonant_set) log << ' ' << k;
    log << '\n';
  }
  return exit_ok;
}

int run_ml(const RunConfig& cfg, Outputs& o, std::ostream& log, bool quiet) {
  std::vector<double> values;
  for (const auto& q : cfg.ml_queries) values.push_back(ml_eval(q, cfg.ml));
  ReportWriter w(o.report);
  w.put("mode", "ml");
  w.section("ml");
  w.put("abs_tol", cfg.ml.abs_tol);
  w.put("values", values);
  write_status(w, "ok", {}, "");
  write_ml_csv(o.ml, cfg.ml_queries, values);
  o.has_ml = true;
  if (!quiet) log << "ml: " << values.size() << " values\n";
  return exit_ok;
}

int run_selftest_mode(Outputs& o, std::ostream& log, bool quiet) {
  const auto checks = run_selftest();
  ReportWriter w(o.report);
  w.put("mode", "selftest");
  bool all = true;
  int i = 0;
  for (const auto& c : checks) {
    w.section("check." + std::to_string(++i));
    w.put("name", c.name);
    w.put("value", c.value);
    w.put("limit", c.limit);
    w.put("passed", c.passed);
    all = all && c.passed;
    if (!quiet) log << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << fmt17(c.value) << " vs " << fmt17(c.limit) << ")\n";
  }
  write_status(w, all ? "ok" : "failed", {}, "");
  return all ? exit_ok : exit_failure;
}

}  // namespace

int run(const RunConfig& cfg, RunMode mode, const fs::path& out_dir, std::ostream& log, bool quiet) {
  Outputs o;
  int code = exit_ok;
  try {
    if (mode != RunMode::selftest) cfg.validate();
    switch (mode) {
      case RunMode::forward: code = run_forward(cfg, o, log, quiet); break;
      case RunMode::inverse: code = run_inverse(cfg, o, log, quiet); break;
      case RunMode::analyze: code = run_analyze(cfg, o, log, quiet); break;
      case RunMode::ml: code = run_ml(cfg, o, log, quiet); break;
      case RunMode::selftest: code = run_selftest_mode(o, log, quiet); break;
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::invalid_argument& e) {
    log << "precondition failed: " << e.what() << '\n';
    return exit_config;
  }
  flush(o, out_dir, log, quiet);
  return code;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Forward and inverse solver for the mixed fractional/parabolic problem with a non-local time condition"};
  std::string mode_name, config_path, out_dir;
  int modes = 0;
  bool quiet = false;
  app.add_option("mode", mode_name, "forward | inverse | analyze | ml | selftest")
      ->required()
      ->check(CLI::IsMember({"forward", "inverse", "analyze", "ml", "selftest"}));
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--modes", modes, "number of retained modes (overrides problem.modes)")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "suppress progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    const RunMode mode = parse_mode(mode_name);
    RunConfig cfg;
    if (!config_path.empty())
      cfg = load_config(config_path);
    else if (mode != RunMode::selftest)
      throw ConfigError("--config is required for mode " + mode_name);
    if (modes > 0) cfg.problem.mode_count = modes;
    const fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);
    if (!quiet) std::cerr << "threads: " << kernels::thread_count() << '\n';
    return run(cfg, mode, dir, std::cerr, quiet);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace dezin
