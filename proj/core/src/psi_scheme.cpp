#include "spe/psi_scheme.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "spe/diagnostics.hpp"
#include "spe/error.hpp"

namespace spe {

namespace {

double cubic_value(double c2, double c1, double c0, double p) {
  return ((p + c2) * p + c1) * p + c0;
}

double cubic_slope(double c2, double c1, double p) {
  return (3.0 * p + 2.0 * c2) * p + c1;
}

double polish(double c2, double c1, double c0, double p) {
  const double f = cubic_value(c2, c1, c0, p);
  const double df = cubic_slope(c2, c1, p);
  if (df == 0.0 || !std::isfinite(df)) return p;
  const double q = p - f / df;
  return std::abs(cubic_value(c2, c1, c0, q)) <= std::abs(f) ? q : p;
}

// Real roots of the monic cubic, unordered.
int real_roots(double c2, double c1, double c0, std::array<double, 3>& roots) {
  const double shift = c2 / 3.0;
  const double q = (c2 * c2 - 3.0 * c1) / 9.0;
  const double r = (c2 * (2.0 * c2 * c2 - 9.0 * c1) + 27.0 * c0) / 54.0;
  const double q3 = q * q * q;
  if (r * r < q3) {
    const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    const double amp = -2.0 * std::sqrt(q);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    roots[0] = amp * std::cos(theta / 3.0) - shift;
    roots[1] = amp * std::cos((theta + two_pi) / 3.0) - shift;
    roots[2] = amp * std::cos((theta - two_pi) / 3.0) - shift;
    return 3;
  }
  const double a = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
  const double b = a == 0.0 ? 0.0 : q / a;
  roots[0] = (a + b) - shift;
  return 1;
}

}  // namespace

CubicCoefficients cubic_coefficients(const CellInputs& c) {
  const double s = c.p_t_right_j + c.p_t_here_j + c.p_t_right_j1;
  const double a = 2.0 * c.dx / c.dt + 0.5 * c.dx * c.dx;
  CubicCoefficients k;
  k.c2 = 3.0 * s;
  k.c1 = 3.0 * (s * s + 4.0 * a);
  k.c0 = s * s * s + 24.0 * c.s_right - (24.0 / c.dt) * (c.phi_right_j1 - c.phi_here_j) -
         12.0 * c.dx * (c.phi_right_j + c.phi_right_j1) + 12.0 * a * c.p_t_right_j1 +
         6.0 * c.dx * c.dx * (c.p_t_right_j + c.p_t_here_j);
  return k;
}

double solve_cubic_select(double c2, double c1, double c0, double reference) {
  if (!std::isfinite(c2) || !std::isfinite(c1) || !std::isfinite(c0)) {
    raise(ErrorCode::NoRealRoot, "non-finite cubic coefficients");
  }
  std::array<double, 3> roots{};
  const int count = real_roots(c2, c1, c0, roots);
  double best = 0.0;
  double best_dist = INFINITY;
  for (int k = 0; k < count; ++k) {
    const double root = polish(c2, c1, c0, roots[k]);
    if (!std::isfinite(root)) continue;
    const double dist = std::abs(root - reference);
    if (dist < best_dist || (dist == best_dist && root > best)) {
      best = root;
      best_dist = dist;
    }
  }
  if (!std::isfinite(best_dist)) raise(ErrorCode::NoRealRoot, "cubic has no finite real root");
  return best;
}

double update_phi(const CellInputs& c, double p_t_new) {
  const double s = c.p_t_right_j + c.p_t_here_j + c.p_t_right_j1;
  return (c.phi_right_j - c.phi_here_j + c.phi_right_j1) - c.dx * s - c.dx * p_t_new;
}

double update_sx(const CellInputs& c, double p_t_new, double phi_new) {
  const double ratio = c.dx / c.dt;
  return c.s_right - ratio * (c.p_t_here_j + c.p_t_right_j - c.p_t_right_j1) + ratio * p_t_new -
         0.5 * c.dx * (c.phi_right_j + c.phi_here_j + c.phi_right_j1) - 0.5 * c.dx * phi_new;
}

CellOutputs cell_update(const CellInputs& c) {
  const CubicCoefficients k = cubic_coefficients(c);
  CellOutputs out;
  out.p_t_new = solve_cubic_select(k.c2, k.c1, k.c0, c.p_t_here_j);
  out.phi_new = update_phi(c, out.p_t_new);
  out.s_new = update_sx(c, out.p_t_new, out.phi_new);
  return out;
}

std::array<double, 3> cell_residual(const CellInputs& c, const CellOutputs& out) {
  const double h = std::min(c.dx, c.dt);
  const double pt_sum = c.p_t_right_j + c.p_t_right_j1 + c.p_t_here_j + out.p_t_new;
  const double phi_mid =
      0.25 * (c.phi_right_j + c.phi_right_j1 + c.phi_here_j + out.phi_new);
  const double ea = h * ((c.s_right - out.s_new) / (2.0 * c.dx) +
                         ((out.p_t_new + c.p_t_right_j1) - (c.p_t_here_j + c.p_t_right_j)) /
                             (2.0 * c.dt) -
                         phi_mid);
  const double eb = 0.5 * ((c.phi_right_j + c.phi_right_j1) - (c.phi_here_j + out.phi_new)) -
                    0.5 * c.dx * pt_sum;
  const double ec = 0.5 * ((out.phi_new + c.phi_right_j1) - (c.phi_here_j + c.phi_right_j)) -
                    c.dt * (0.5 * (out.s_new + c.s_right) + pt_sum * pt_sum * pt_sum / 24.0);
  return {ea, eb, ec};
}

double cell_scale(const CellInputs& c, const CellOutputs& out) {
  return std::max({1.0, std::abs(c.p_t_right_j), std::abs(c.p_t_right_j1),
                   std::abs(c.p_t_here_j), std::abs(c.phi_right_j), std::abs(c.phi_right_j1),
                   std::abs(c.phi_here_j), std::abs(c.s_right), std::abs(out.p_t_new),
                   std::abs(out.phi_new), std::abs(out.s_new)});
}

namespace {

double inf_norm(const std::array<double, 3>& r) {
  return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

// d(residual) / d(p_t_new, phi_new, s_new), rows matching cell_residual.
Eigen::Matrix3d unknown_jacobian(const CellInputs& c, const CellOutputs& out) {
  const double h = std::min(c.dx, c.dt);
  const double pt_sum = c.p_t_right_j + c.p_t_right_j1 + c.p_t_here_j + out.p_t_new;
  Eigen::Matrix3d j;
  j << h / (2.0 * c.dt), -0.25 * h, -h / (2.0 * c.dx),
       -0.5 * c.dx,      -0.5,       0.0,
       -c.dt * pt_sum * pt_sum / 8.0, 0.5, -0.5 * c.dt;
  return j;
}

std::string describe_cell(const CellInputs& c) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "cell{pt=(%.6g,%.6g,%.6g) phi=(%.6g,%.6g,%.6g) s=%.6g dx=%.6g dt=%.6g}",
                c.p_t_right_j, c.p_t_right_j1, c.p_t_here_j, c.phi_right_j, c.phi_right_j1,
                c.phi_here_j, c.s_right, c.dx, c.dt);
  return buf;
}

}  // namespace

OracleSolution implicit_cell_oracle(const CellInputs& c, const OracleOptions& opts) {
  OracleSolution sol;
  CellOutputs& x = sol.outputs;
  x = {c.p_t_here_j, c.phi_here_j, c.s_right};

  auto r = cell_residual(c, x);
  double norm = inf_norm(r);
  // Converged once the residual is within tolerance and Newton can no longer
  // move the iterate (negligible step or no further decrease).
  for (int it = 0; it < opts.max_iterations; ++it) {
    sol.iterations = it;
    sol.residual = norm;
    const bool small = norm < opts.tolerance * cell_scale(c, x);
    if (norm == 0.0) return sol;

    const Eigen::Vector3d step =
        unknown_jacobian(c, x).partialPivLu().solve(Eigen::Vector3d(r[0], r[1], r[2]));
    const double size = std::max({1.0, std::abs(x.p_t_new), std::abs(x.phi_new), std::abs(x.s_new)});
    if (small && step.cwiseAbs().maxCoeff() <= 1e-15 * size) return sol;

    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k <= opts.max_halvings; ++k, lambda *= 0.5) {
      const CellOutputs trial{x.p_t_new - lambda * step[0], x.phi_new - lambda * step[1],
                              x.s_new - lambda * step[2]};
      const auto r_trial = cell_residual(c, trial);
      const double n_trial = inf_norm(r_trial);
      if (n_trial < norm || (small && k == 0 && n_trial <= norm)) {
        x = trial;
        r = r_trial;
        norm = n_trial;
        improved = true;
        break;
      }
    }
    if (!improved) {
      if (small) return sol;
      break;
    }
  }
  sol.residual = norm;
  if (norm < opts.tolerance * cell_scale(c, x)) return sol;
  raise(ErrorCode::NewtonDiverged, "after " + std::to_string(sol.iterations) +
                                       " iterations residual " + std::to_string(norm) + " at " +
                                       describe_cell(c));
}

CellOutputVariation tangent_cell_update(const CellInputs& c, const CellOutputs& out,
                                        const CellVariation& v) {
  const double h = std::min(c.dx, c.dt);
  const double pt_sum = c.p_t_right_j + c.p_t_right_j1 + c.p_t_here_j + out.p_t_new;
  const double d_pt = v.p_t_right_j + v.p_t_right_j1 + v.p_t_here_j;

  // Residual variation due to the known corners.
  Eigen::Vector3d rhs;
  rhs[0] = h * (v.s_right / (2.0 * c.dx) +
                (v.p_t_right_j1 - v.p_t_here_j - v.p_t_right_j) / (2.0 * c.dt) -
                0.25 * (v.phi_right_j + v.phi_right_j1 + v.phi_here_j));
  rhs[1] = 0.5 * (v.phi_right_j + v.phi_right_j1 - v.phi_here_j) - 0.5 * c.dx * d_pt;
  rhs[2] = 0.5 * (v.phi_right_j1 - v.phi_here_j - v.phi_right_j) -
           c.dt * (0.5 * v.s_right + pt_sum * pt_sum * d_pt / 8.0);

  const Eigen::Matrix3d jac = unknown_jacobian(c, out);
  const double det = jac.determinant();
  const double size = jac.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-14 * size * size * size)) {
    raise(ErrorCode::SingularLinearization, "degenerate Jacobian at " + describe_cell(c));
  }
  const Eigen::Vector3d d = jac.partialPivLu().solve(-rhs);
  return {d[0], d[1], d[2]};
}

CellInputs gather_cell(const DWColumn& right, const DWColumn& left, int j, double dx, double dt) {
  const auto k = static_cast<std::size_t>(j);
  return {right.p_t[k], right.p_t[k + 1], left.p_t[k], right.phi[k], right.phi[k + 1],
          left.phi[k], right.s_x[k], dx, dt};
}

namespace {

void check_column(const DWColumn& right, const GridSpec& grid) {
  if (!right.has_shape(grid.n_t())) {
    raise(ErrorCode::ShapeMismatch, "column " + std::to_string(right.i) +
                                        " does not match grid n_t=" + std::to_string(grid.n_t()));
  }
}

void march_into(const DWColumn& right, DWColumn& left, const GridSpec& grid) {
  const double dx = grid.dx();
  const double dt = grid.dt();
  for (int j = 0; j < grid.n_t(); ++j) {
    const CellInputs c = gather_cell(right, left, j, dx, dt);
    CellOutputs out;
    try {
      out = cell_update(c);
    } catch (const Error& e) {
      rethrow_with_context(e, "cell (i=" + std::to_string(left.i) + ", j=" + std::to_string(j) + ")");
    }
    const auto k = static_cast<std::size_t>(j);
    left.p_t[k + 1] = out.p_t_new;
    left.phi[k + 1] = out.phi_new;
    left.s_x[k] = out.s_new;
  }
}

}  // namespace

DWColumn march_column(const DWColumn& right, double p_t_0, double phi_0, const GridSpec& grid) {
  check_column(right, grid);
  DWColumn left = DWColumn::zeros(right.i - 1, grid.n_t());
  left.p_t[0] = p_t_0;
  left.phi[0] = phi_0;
  march_into(right, left, grid);
  return left;
}

TangentColumn march_tangent_column(const DWColumn& base_right, const DWColumn& base_left,
                                   const TangentColumn& tangent_right, double d_p_t_0,
                                   double d_phi_0, const GridSpec& grid) {
  check_column(base_right, grid);
  check_column(base_left, grid);
  if (!tangent_right.has_shape(grid.n_t())) {
    raise(ErrorCode::ShapeMismatch, "tangent column does not match grid");
  }
  TangentColumn left = TangentColumn::zeros(base_left.i, grid.n_t());
  left.p_t[0] = d_p_t_0;
  left.phi[0] = d_phi_0;
  for (int j = 0; j < grid.n_t(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    const CellInputs c = gather_cell(base_right, base_left, j, grid.dx(), grid.dt());
    const CellOutputs out{base_left.p_t[k + 1], base_left.phi[k + 1], base_left.s_x[k]};
    const CellVariation v{tangent_right.p_t[k],   tangent_right.p_t[k + 1], left.p_t[k],
                          tangent_right.phi[k],   tangent_right.phi[k + 1], left.phi[k],
                          tangent_right.s_x[k]};
    CellOutputVariation d;
    try {
      d = tangent_cell_update(c, out, v);
    } catch (const Error& e) {
      rethrow_with_context(e, "tangent cell (i=" + std::to_string(left.i) +
                                  ", j=" + std::to_string(j) + ")");
    }
    left.p_t[k + 1] = d.p_t_new;
    left.phi[k + 1] = d.phi_new;
    left.s_x[k] = d.s_new;
  }
  return left;
}

Trace march_trace(const GridSpec& grid, std::span<const double> u0, double rel_tol) {
  const InitialRow row = initial_row(u0, grid, rel_tol);
  Trace trace(static_cast<std::size_t>(grid.n_x()) + 1);
  trace.back() = boundary_column(grid);
  for (int i = grid.n_x() - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    trace[k] = march_column(trace[k + 1], row.p_t[k], row.phi[k], grid);
  }
  return trace;
}

TangentTrace propagate_tangent(const Trace& base, const TangentSeed& seed, const GridSpec& grid) {
  const auto n = static_cast<std::size_t>(grid.n_x()) + 1;
  if (base.size() != n || seed.d_p_t_row.size() != n || seed.d_phi_row.size() != n) {
    raise(ErrorCode::ShapeMismatch, "tangent seed or base trace does not match grid");
  }
  TangentTrace out(n);
  out.back() = seed.boundary;
  out.back().i = grid.n_x();
  for (std::size_t k = n - 1; k-- > 0;) {
    out[k] = march_tangent_column(base[k + 1], base[k], out[k + 1], seed.d_p_t_row[k],
                                  seed.d_phi_row[k], grid);
  }
  return out;
}

SimulationResult simulate(const GridSpec& grid, std::span<const double> u0,
                          const SimulateOptions& opts) {
  for (int j : opts.snapshot_steps) {
    if (j < 0 || j > grid.n_t()) {
      raise(ErrorCode::InvalidValue, "snapshot step " + std::to_string(j) + " outside grid");
    }
  }
  const InitialRow row = initial_row(u0, grid, opts.boundary_tolerance);

  const int n_x = grid.n_x();
  const int n_t = grid.n_t();
  const double dx = grid.dx();
  const double dt = grid.dt();

  SimulationResult result;
  result.snapshots.resize(opts.snapshot_steps.size());
  for (std::size_t s = 0; s < opts.snapshot_steps.size(); ++s) {
    result.snapshots[s].t = grid.t(opts.snapshot_steps[s]);
    result.snapshots[s].u.assign(static_cast<std::size_t>(n_x) + 1, 0.0);
  }
  std::vector<double> quadratic(static_cast<std::size_t>(n_t) + 1, 0.0);
  std::vector<double> energy(static_cast<std::size_t>(n_t), 0.0);

  const auto accumulate = [&](const DWColumn& col) {
    const double w = (col.i == 0 || col.i == n_x) ? 0.5 * dx : dx;
    for (int j = 0; j <= n_t; ++j) {
      const double u = 2.0 * col.p_t[static_cast<std::size_t>(j)];
      quadratic[static_cast<std::size_t>(j)] += w * u * u;
    }
    for (int j = 0; j < n_t; ++j) {
      const auto k = static_cast<std::size_t>(j);
      const DWTriple z{0.5 * (col.phi[k] + col.phi[k + 1]), 0.5 * col.s_x[k],
                       0.5 * (col.p_t[k] + col.p_t[k + 1])};
      energy[k] += w * dw_hamiltonian(z);
    }
    for (std::size_t s = 0; s < opts.snapshot_steps.size(); ++s) {
      result.snapshots[s].u[static_cast<std::size_t>(col.i)] =
          2.0 * col.p_t[static_cast<std::size_t>(opts.snapshot_steps[s])];
    }
  };

  const auto start = std::chrono::steady_clock::now();
  DWColumn right = boundary_column(grid);
  DWColumn left = DWColumn::zeros(n_x - 1, n_t);
  accumulate(right);
  for (int i = n_x - 1; i >= 0; --i) {
    left.i = i;
    left.p_t[0] = row.p_t[static_cast<std::size_t>(i)];
    left.phi[0] = row.phi[static_cast<std::size_t>(i)];
    march_into(right, left, grid);
    if (opts.check_residuals) {
      for (int j = 0; j < n_t; ++j) {
        const CellInputs c = gather_cell(right, left, j, dx, dt);
        const auto k = static_cast<std::size_t>(j);
        const CellOutputs out{left.p_t[k + 1], left.phi[k + 1], left.s_x[k]};
        const double rel = inf_norm(cell_residual(c, out)) / cell_scale(c, out);
        result.max_scaled_residual = std::max(result.max_scaled_residual, rel);
      }
    }
    accumulate(left);
    if (opts.on_column) opts.on_column(right, left);
    std::swap(right, left);
  }
  const auto stop = std::chrono::steady_clock::now();

  RunReport& report = result.report;
  report.scheme = Scheme::Polysymplectic;
  report.grid = grid;
  report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  report.invariant_drift["quadratic"] = max_relative_drift(quadratic);
  report.invariant_drift["dw_energy"] = max_relative_drift(energy);
  result.quadratic_by_step = std::move(quadratic);
  return result;
}

}  // namespace spe
