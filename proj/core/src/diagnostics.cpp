#include "spe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spe/error.hpp"
#include "spe/spectral.hpp"

namespace spe {

double sigma_error(const FieldSnapshot& u_num, const FieldSnapshot& u_ref) {
  if (u_num.u.size() != u_ref.u.size()) {
    raise(ErrorCode::LengthMismatch, "snapshots have " + std::to_string(u_num.u.size()) +
                                         " and " + std::to_string(u_ref.u.size()) + " points");
  }
  if (std::abs(u_num.t - u_ref.t) > 1e-12 * std::max(1.0, std::abs(u_ref.t))) {
    raise(ErrorCode::LengthMismatch, "snapshots are at different times");
  }
  if (u_num.u.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < u_num.u.size(); ++i) {
    const double d = u_num.u[i] - u_ref.u[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(u_num.u.size()));
}

double quadratic_invariant(const FieldSnapshot& u, double dx) {
  const auto& v = u.u;
  if (v.size() < 2) return 0.0;
  double sum = 0.5 * (v.front() * v.front() + v.back() * v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i] * v[i];
  return sum * dx;
}

double max_relative_drift(std::span<const double> series) {
  if (series.empty()) return 0.0;
  const double ref = series.front();
  const double denom = ref != 0.0 ? std::abs(ref) : 1.0;
  double worst = 0.0;
  for (double q : series) worst = std::max(worst, std::abs(q - ref) / denom);
  return worst;
}

double msl_column_residual(const TangentColumn& v1_right, const TangentColumn& v1_left,
                           const TangentColumn& v2_right, const TangentColumn& v2_left,
                           const GridSpec& grid) {
  const int n_t = grid.n_t();
  for (const TangentColumn* c : {&v1_right, &v1_left, &v2_right, &v2_left}) {
    if (!c->has_shape(n_t)) raise(ErrorCode::ShapeMismatch, "tangent column does not match grid");
  }
  const auto row_form = [&](std::size_t j) {
    const DWVariation a{0.5 * (v1_left.phi[j] + v1_right.phi[j]), 0.0,
                        0.5 * (v1_left.p_t[j] + v1_right.p_t[j])};
    const DWVariation b{0.5 * (v2_left.phi[j] + v2_right.phi[j]), 0.0,
                        0.5 * (v2_left.p_t[j] + v2_right.p_t[j])};
    return kappa_eval(Axis::t, a, b);
  };
  const auto column_form = [](const TangentColumn& w1, const TangentColumn& w2, std::size_t j) {
    const DWVariation a{0.5 * (w1.phi[j] + w1.phi[j + 1]), 0.5 * w1.s_x[j], 0.0};
    const DWVariation b{0.5 * (w2.phi[j] + w2.phi[j + 1]), 0.5 * w2.s_x[j], 0.0};
    return -kappa_eval(Axis::x, a, b);
  };

  double worst = 0.0;
  double lower = row_form(0);
  for (int jj = 0; jj < n_t; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double upper = row_form(j + 1);
    const double r = (upper - lower) / grid.dt() +
                     (column_form(v1_right, v2_right, j) - column_form(v1_left, v2_left, j)) /
                         grid.dx();
    worst = std::max(worst, std::abs(r));
    lower = upper;
  }
  return worst;
}

double max_tangent_magnitude(const TangentTrace& v) {
  double m = 0.0;
  for (const auto& c : v) {
    for (double x : c.p_t) m = std::max(m, std::abs(x));
    for (double x : c.phi) m = std::max(m, std::abs(x));
    for (double x : c.s_x) m = std::max(m, std::abs(x));
  }
  return m;
}

double msl_residual(const Trace& base, const TangentTrace& v1, const TangentTrace& v2,
                    const GridSpec& grid) {
  const auto n = static_cast<std::size_t>(grid.n_x()) + 1;
  if (base.size() != n || v1.size() != n || v2.size() != n) {
    raise(ErrorCode::ShapeMismatch, "traces must hold n_x + 1 columns");
  }
  const double norm = max_tangent_magnitude(v1) * max_tangent_magnitude(v2);
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    worst = std::max(worst, msl_column_residual(v1[k + 1], v1[k], v2[k + 1], v2[k], grid));
  }
  return worst / norm;
}

TangentSeed random_tangent_seed(const GridSpec& grid, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto n = static_cast<std::size_t>(grid.n_x()) + 1;
  TangentSeed s;
  s.d_p_t_row.resize(n);
  s.d_phi_row.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.d_p_t_row[i] = dist(rng);
    s.d_phi_row[i] = dist(rng);
  }
  s.boundary = TangentColumn::zeros(grid.n_x(), grid.n_t());
  for (double& v : s.boundary.p_t) v = dist(rng);
  for (double& v : s.boundary.phi) v = dist(rng);
  for (double& v : s.boundary.s_x) v = dist(rng);
  s.boundary.p_t[0] = s.d_p_t_row.back();
  s.boundary.phi[0] = s.d_phi_row.back();
  return s;
}

TangentTrace random_tangent_trace(const GridSpec& grid, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  TangentTrace trace;
  for (int i = 0; i <= grid.n_x(); ++i) {
    TangentColumn c = TangentColumn::zeros(i, grid.n_t());
    for (double& v : c.p_t) v = dist(rng);
    for (double& v : c.phi) v = dist(rng);
    for (double& v : c.s_x) v = dist(rng);
    trace.push_back(std::move(c));
  }
  return trace;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct LevelOutcome {
  double sigma = 0.0;
  double wall = 0.0;
};

LevelOutcome run_psi(const FieldFunction& exact, const GridSpec& grid, const StudyOptions& opts) {
  FieldSnapshot initial{0.0, std::vector<double>(static_cast<std::size_t>(grid.n_x()) + 1)};
  FieldSnapshot reference{grid.t_final(), initial.u};
  for (int i = 0; i <= grid.n_x(); ++i) {
    initial.u[static_cast<std::size_t>(i)] = exact(grid.x(i), 0.0);
    reference.u[static_cast<std::size_t>(i)] = exact(grid.x(i), grid.t_final());
  }
  SimulateOptions sim;
  sim.snapshot_steps = {grid.n_t()};
  sim.boundary_tolerance = opts.boundary_tolerance;
  std::vector<double> walls;
  double sigma = 0.0;
  for (int r = 0; r < std::max(1, opts.repetitions); ++r) {
    const SimulationResult res = simulate(grid, initial.u, sim);
    walls.push_back(res.report.wall_seconds);
    sigma = sigma_error(res.snapshots.front(), reference);
  }
  return {sigma, median(walls)};
}

LevelOutcome run_spectral(const FieldFunction& exact, int n, double x_max, double dt, int n_steps,
                          const StudyOptions& opts) {
  const double h = x_max / n;
  std::vector<double> u0(static_cast<std::size_t>(n));
  FieldSnapshot reference{n_steps * dt, std::vector<double>(static_cast<std::size_t>(n))};
  for (int k = 0; k < n; ++k) {
    u0[static_cast<std::size_t>(k)] = exact(k * h, 0.0);
    reference.u[static_cast<std::size_t>(k)] = exact(k * h, n_steps * dt);
  }
  SpectralConfig cfg{x_max, n, dt, n_steps, opts.dealias};
  std::vector<double> walls;
  double sigma = 0.0;
  for (int r = 0; r < std::max(1, opts.repetitions); ++r) {
    const SpectralResult res = simulate_spectral(cfg, u0, {n_steps});
    walls.push_back(res.report.wall_seconds);
    sigma = sigma_error(res.snapshots.front(), reference);
  }
  return {sigma, median(walls)};
}

FieldFunction sakovich_field(const SolitonParams& p) {
  return [p](double x, double t) { return sakovich_u(p, x, t); };
}

}  // namespace

ConvergenceTable convergence_study(Scheme scheme, const SolitonParams& params,
                                   const std::vector<StudyLevel>& levels, double t_final,
                                   const StudyOptions& opts) {
  if (levels.empty()) raise(ErrorCode::InvalidValue, "convergence study needs at least one level");
  const FieldFunction exact = sakovich_field(params);
  ConvergenceTable table;
  table.scheme = scheme;
  for (const StudyLevel& level : levels) {
    ConvergenceRow row;
    row.dx = opts.x_max / level.n_x;
    row.dt = level.dt;
    try {
      const GridSpec grid = GridSpec::for_final_time(opts.x_max, level.n_x, level.dt, t_final);
      const LevelOutcome out =
          scheme == Scheme::Polysymplectic
              ? run_psi(exact, grid, opts)
              : run_spectral(exact, level.n_x, opts.x_max, level.dt, grid.n_t(), opts);
      row.sigma_final = out.sigma;
      row.wall_seconds = out.wall;
    } catch (const Error& e) {
      row.sigma_final = NAN;
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const ConvergenceRow& prev = table.rows[k - 1];
    ConvergenceRow& row = table.rows[k];
    if (!row.error.empty() || !prev.error.empty()) continue;
    const double ratio = prev.dx != row.dx ? prev.dx / row.dx : prev.dt / row.dt;
    if (ratio == 1.0 || row.sigma_final <= 0.0 || prev.sigma_final <= 0.0) continue;
    row.measured_order = std::log(prev.sigma_final / row.sigma_final) / std::log(ratio);
  }
  return table;
}

std::vector<double> sigmas(const ConvergenceTable& table) {
  std::vector<double> out;
  for (const auto& row : table.rows) {
    if (row.error.empty()) out.push_back(row.sigma_final);
  }
  return out;
}

bool non_increasing_to_floor(const std::vector<double>& sigma, double floor_factor) {
  if (sigma.empty()) return true;
  const double floor = sigma.back();
  for (std::size_t k = 1; k < sigma.size(); ++k) {
    if (sigma[k - 1] <= floor_factor * floor) break;
    if (sigma[k] > sigma[k - 1]) return false;
  }
  return true;
}

ComparisonReport compare_schemes_with(const FieldFunction& exact, const GridSpec& psi_grid,
                                      int spectral_n, const StudyOptions& opts) {
  ComparisonReport report;
  report.t_final = psi_grid.t_final();

  const LevelOutcome psi = run_psi(exact, psi_grid, opts);
  ComparisonRow psi_row;
  psi_row.report.scheme = Scheme::Polysymplectic;
  psi_row.report.grid = psi_grid;
  psi_row.report.wall_seconds = psi.wall;
  psi_row.report.sigma_by_time[report.t_final] = psi.sigma;
  psi_row.sigma_final = psi.sigma;
  report.rows.push_back(psi_row);

  const LevelOutcome spectral = run_spectral(exact, spectral_n, psi_grid.x_max(), psi_grid.dt(),
                                             psi_grid.n_t(), opts);
  ComparisonRow spectral_row;
  spectral_row.report.scheme = Scheme::PseudoSpectral;
  spectral_row.report.grid = GridSpec(psi_grid.x_max(), spectral_n, psi_grid.dt(), psi_grid.n_t());
  spectral_row.report.wall_seconds = spectral.wall;
  spectral_row.report.sigma_by_time[report.t_final] = spectral.sigma;
  spectral_row.sigma_final = spectral.sigma;
  report.rows.push_back(spectral_row);
  return report;
}

ComparisonReport compare_schemes(const SolitonParams& params, const GridSpec& psi_grid,
                                 int spectral_n, double t_final, const StudyOptions& opts) {
  const GridSpec grid =
      GridSpec::for_final_time(psi_grid.x_max(), psi_grid.n_x(), psi_grid.dt(), t_final);
  ComparisonReport report = compare_schemes_with(sakovich_field(params), grid, spectral_n, opts);
  report.params = params;
  return report;
}

}  // namespace spe
