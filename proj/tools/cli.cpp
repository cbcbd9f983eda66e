#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "spe/diagnostics.hpp"
#include "spe/error.hpp"
#include "spe/exact.hpp"
#include "spe/io.hpp"
#include "spe/psi_scheme.hpp"
#include "spe/spectral.hpp"

namespace spe::cli {

namespace {

namespace fs = std::filesystem;

std::string step_name(const char* prefix, int j) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_j%07d.csv", prefix, j);
  return buf;
}

void prepare_output(const SimConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) raise(ErrorCode::IoError, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
}

void write_timing(const fs::path& path, const std::vector<std::pair<std::string, double>>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& [key, seconds] : entries) out << key << '=' << format_number(seconds) << '\n';
  if (!out.flush()) raise(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<int> logged_steps(const SimConfig& cfg, const GridSpec& grid, std::ostream& err) {
  const std::vector<int> steps = snap_times(cfg.snapshot_times, grid);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    err << "snapshot t=" << format_number(cfg.snapshot_times[k]) << " -> j=" << steps[k]
        << " (t=" << format_number(grid.t(steps[k])) << ")\n";
  }
  return steps;
}

double initial_value(const SimConfig& cfg, const SolitonParams& p, double x) {
  return cfg.initial == InitialData::Zero ? 0.0 : sakovich_u(p, x, 0.0);
}

int cmd_simulate(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  const GridSpec grid = cfg.grid();
  const SolitonParams p = cfg.soliton();
  const std::vector<int> steps = logged_steps(cfg, grid, err);
  prepare_output(cfg);

  std::vector<FieldSnapshot> snapshots;
  RunReport report;
  std::size_t n_points = 0;
  if (cfg.scheme == Scheme::Polysymplectic) {
    n_points = static_cast<std::size_t>(grid.n_x()) + 1;
    std::vector<double> u0(n_points);
    for (int i = 0; i <= grid.n_x(); ++i) u0[static_cast<std::size_t>(i)] = initial_value(cfg, p, grid.x(i));
    SimulateOptions opts;
    opts.snapshot_steps = steps;
    opts.boundary_tolerance = cfg.boundary_tol;
    SimulationResult res = simulate(grid, u0, opts);
    snapshots = std::move(res.snapshots);
    report = std::move(res.report);
  } else {
    n_points = static_cast<std::size_t>(grid.n_x());
    std::vector<double> u0(n_points);
    for (int k = 0; k < grid.n_x(); ++k) u0[static_cast<std::size_t>(k)] = initial_value(cfg, p, grid.x(k));
    SpectralConfig sc{cfg.x_max, cfg.n_x, cfg.dt, grid.n_t(), cfg.dealias};
    SpectralResult res = simulate_spectral(sc, u0, steps);
    snapshots = std::move(res.snapshots);
    report = std::move(res.report);
  }

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const FieldSnapshot& snap = snapshots[k];
    write_snapshot(cfg.output_dir / step_name("snapshot", steps[k]), snap, grid.dx());
    FieldSnapshot exact{snap.t, std::vector<double>(n_points, 0.0)};
    if (cfg.initial == InitialData::Soliton) {
      for (std::size_t i = 0; i < n_points; ++i) {
        exact.u[i] = sakovich_u(p, grid.x(static_cast<int>(i)), snap.t);
      }
    }
    report.sigma_by_time[snap.t] = sigma_error(snap, exact);
  }
  write_report(cfg.output_dir / "report.txt", report, {.include_timing = false});
  write_timing(cfg.output_dir / "timing.txt", {{"wall_seconds", report.wall_seconds}});

  out << "scheme=" << to_string(report.scheme) << ' ' << grid.describe() << '\n';
  for (const auto& [t, s] : report.sigma_by_time) {
    out << "sigma(t=" << format_number(t) << ")=" << format_number(s) << '\n';
  }
  out << "wall_seconds=" << format_number(report.wall_seconds) << '\n';
  return kOk;
}

int cmd_soliton(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  const GridSpec grid = cfg.grid();
  const SolitonParams p = cfg.soliton();
  const std::vector<int> steps = logged_steps(cfg, grid, err);
  prepare_output(cfg);
  for (int j : steps) {
    const FieldSnapshot snap = sakovich_profile(p, grid, grid.t(j), cfg.boundary_tol);
    const fs::path path = cfg.output_dir / step_name("exact", j);
    write_snapshot(path, snap, grid.dx());
    out << "wrote " << path.string() << '\n';
  }
  return kOk;
}

std::vector<StudyLevel> halving_levels(const SimConfig& cfg) {
  std::vector<StudyLevel> levels;
  for (int k = 0; k < cfg.levels; ++k) {
    levels.push_back({cfg.n_x << k, cfg.dt / static_cast<double>(1 << k)});
  }
  return levels;
}

StudyOptions study_options(const SimConfig& cfg) {
  StudyOptions opts;
  opts.x_max = cfg.x_max;
  opts.boundary_tolerance = cfg.boundary_tol;
  opts.repetitions = cfg.repetitions;
  opts.dealias = cfg.dealias;
  return opts;
}

int cmd_convergence(const SimConfig& cfg, std::ostream& out, std::ostream&) {
  prepare_output(cfg);
  const ConvergenceTable table =
      convergence_study(cfg.scheme, cfg.soliton(), halving_levels(cfg), cfg.t_final, study_options(cfg));
  write_report(cfg.output_dir / "convergence.csv", table, {.include_timing = false});
  std::vector<std::pair<std::string, double>> timing;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    timing.emplace_back("level" + std::to_string(k) + ".wall_seconds", table.rows[k].wall_seconds);
  }
  write_timing(cfg.output_dir / "timing.txt", timing);

  bool failed = false;
  for (const auto& row : table.rows) {
    out << "dx=" << format_number(row.dx) << " dt=" << format_number(row.dt)
        << " sigma=" << format_number(row.sigma_final);
    if (row.measured_order) out << " order=" << format_number(*row.measured_order);
    if (!row.error.empty()) {
      out << " error=" << row.error;
      failed = true;
    }
    out << '\n';
  }
  return failed ? kNumerical : kOk;
}

int cmd_compare(const SimConfig& cfg, std::ostream& out, std::ostream&) {
  prepare_output(cfg);
  int spectral_n = 2;
  while (spectral_n < cfg.n_x) spectral_n *= 2;
  StudyOptions opts = study_options(cfg);
  ComparisonReport report;
  if (cfg.initial == InitialData::Zero) {
    report = compare_schemes_with([](double, double) { return 0.0; }, cfg.grid(), spectral_n, opts);
    report.params = cfg.soliton();
  } else {
    report = compare_schemes(cfg.soliton(), cfg.grid(), spectral_n, cfg.t_final, opts);
  }
  write_report(cfg.output_dir / "compare.csv", report, {.include_timing = false});
  std::vector<std::pair<std::string, double>> timing;
  for (const auto& row : report.rows) {
    timing.emplace_back(std::string(to_string(row.report.scheme)) + ".wall_seconds",
                        row.report.wall_seconds);
  }
  write_timing(cfg.output_dir / "timing.txt", timing);

  for (const auto& row : report.rows) {
    out << to_string(row.report.scheme) << ": sigma=" << format_number(row.sigma_final)
        << " wall_seconds=" << format_number(row.report.wall_seconds) << '\n';
  }
  if (report.rows.size() == 2 && report.rows[0].sigma_final > 0.0 &&
      report.rows[0].report.wall_seconds > 0.0) {
    out << "sigma ratio (pseudospectral/polysymplectic)="
        << format_number(report.rows[1].sigma_final / report.rows[0].sigma_final) << '\n'
        << "time ratio (pseudospectral/polysymplectic)="
        << format_number(report.rows[1].report.wall_seconds / report.rows[0].report.wall_seconds)
        << '\n';
  }
  return kOk;
}

int cmd_verify(unsigned long seed, std::ostream& out) {
  bool all = true;
  for (const CheckResult& c : verification_battery(seed)) {
    out << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? kOk : kNumerical;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Config: return kConfig;
    case ErrorCategory::Io: return kIo;
    case ErrorCategory::Numerical: return kNumerical;
  }
  return kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Short pulse equation integrators: polysymplectic box scheme and pseudo-spectral baseline", "spe"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned long seed = 1;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "key=value configuration file")->required();
  };
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run one integration and write snapshots");
  CLI::App* soliton_cmd = app.add_subcommand("soliton", "write exact soliton profiles");
  CLI::App* convergence_cmd = app.add_subcommand("convergence", "refinement study against the exact soliton");
  CLI::App* compare_cmd = app.add_subcommand("compare", "polysymplectic vs pseudo-spectral head-to-head");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the structural check battery");
  for (CLI::App* sub : {simulate_cmd, soliton_cmd, convergence_cmd, compare_cmd}) add_config(sub);
  verify_cmd->add_option("--seed", seed, "seed for randomized checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(seed, out);
    const SimConfig cfg = load_config(config_path);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out, err);
    if (soliton_cmd->parsed()) return cmd_soliton(cfg, out, err);
    if (convergence_cmd->parsed()) return cmd_convergence(cfg, out, err);
    if (compare_cmd->parsed()) return cmd_compare(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  err << app.help();
  return kUsage;
}

}  // namespace spe::cli
