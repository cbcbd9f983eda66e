#pragma once

// Line-oriented configuration and deterministic CSV / key=value output.
//
// Config format: one `key = value` per line, '#' starts a comment, blank
// lines ignored. Required keys: x_max, n_x, dt, t_final. Optional keys and
// defaults:
//
//   scheme         polysymplectic | pseudospectral   (polysymplectic)
//   soliton_m      shape parameter in (0, 1)          (0.2)
//   soliton_x0     pulse centre at t = 0              (x_max / 2)
//   initial        soliton | zero                     (soliton)
//   snapshot_times comma separated list in [0, t_final] (0, t_final)
//   output_dir     directory for written files        (.)
//   seed           integer seed for randomized checks (1)
//   dealias        true | false                       (false)
//   boundary_tol   right-boundary tolerance, relative (1e-12)
//   levels         refinement levels for `convergence` (3)
//   repetitions    timing repetitions (median)        (3)

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spe/core_model.hpp"
#include "spe/diagnostics.hpp"
#include "spe/grid.hpp"
#include "spe/report.hpp"

namespace spe {

enum class InitialData { Soliton, Zero };

struct SimConfig {
  Scheme scheme = Scheme::Polysymplectic;
  double x_max = 0.0;
  int n_x = 0;
  double dt = 0.0;
  double t_final = 0.0;
  double soliton_m = 0.2;
  double soliton_x0 = 0.0;
  InitialData initial = InitialData::Soliton;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir = ".";
  unsigned long seed = 1;
  bool dealias = false;
  double boundary_tol = kDefaultBoundaryTolerance;
  int levels = 3;
  int repetitions = 3;

  GridSpec grid() const { return GridSpec::for_final_time(x_max, n_x, dt, t_final); }
  SolitonParams soliton() const { return SolitonParams::make(soliton_m, soliton_x0); }
};

// Throws MissingKey, InvalidValue or UnknownKey (message names the key).
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

// Maps physical times to the nearest time index of the grid.
std::vector<int> snap_times(const std::vector<double>& times, const GridSpec& grid);

// 17 significant digits, negative zero written as 0.
std::string format_number(double v);

// CSV "x,u" with one row per sample, x_k = k * dx.
void write_snapshot(const std::filesystem::path& path, const FieldSnapshot& snapshot, double dx);

struct ReportOptions {
  // Timing is written unless the caller routes it to a separate file.
  bool include_timing = true;
};

// key=value lines in a fixed order:
//   scheme, x_max, n_x, dx, dt, n_t, wall_seconds, sigma@<t>..., drift.<name>...
void write_report(const std::filesystem::path& path, const RunReport& report,
                  const ReportOptions& opts = {});
// CSV: scheme,dx,dt,sigma_final,wall_seconds,measured_order,error
void write_report(const std::filesystem::path& path, const ConvergenceTable& table,
                  const ReportOptions& opts = {});
// CSV: scheme,x_max,n_x,dx,dt,n_t,t_final,sigma_final,wall_seconds
void write_report(const std::filesystem::path& path, const ComparisonReport& report,
                  const ReportOptions& opts = {});

struct SnapshotCsv {
  std::vector<double> x;
  std::vector<double> u;
};

SnapshotCsv read_snapshot(const std::filesystem::path& path);
ConvergenceTable read_convergence_table(const std::filesystem::path& path);

}  // namespace spe
