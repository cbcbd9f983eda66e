#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spe/error.hpp"
#include "spe/exact.hpp"
#include "spe/psi_scheme.hpp"

namespace spe {
namespace {

CellInputs random_cell(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_step(-3.0, 0.0);
  return {unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng),
          std::pow(10.0, log_step(rng)), std::pow(10.0, log_step(rng))};
}

// Independent elimination: given a trial P, the raw midpoint equations for
// phi_x and the balance law fix phi and s; 24x the remaining equation is
// a cubic in P that must coincide with the closed-form coefficients.
double reduced_equation(const CellInputs& c, double p) {
  const double pt_mid = 0.25 * (c.p_t_right_j + c.p_t_right_j1 + c.p_t_here_j + p);
  // (phi_{i+1,j+1/2} - phi_{i,j+1/2}) / dx = 2 pt_mid
  const double phi = c.phi_right_j + c.phi_right_j1 - c.phi_here_j - 4.0 * c.dx * pt_mid;
  const double phi_mid = 0.25 * (c.phi_right_j + c.phi_right_j1 + c.phi_here_j + phi);
  // (s_R - s_L)/(2dx) + (pt_{i+1/2,j+1} - pt_{i+1/2,j})/dt = phi_mid
  const double dpt = 0.5 * (p + c.p_t_right_j1) - 0.5 * (c.p_t_here_j + c.p_t_right_j);
  const double s_left = c.s_right + 2.0 * c.dx * (dpt / c.dt - phi_mid);
  // 24 * [2 p^x_mid + (8/3) pt_mid^3 - (phi_{i+1/2,j+1} - phi_{i+1/2,j}) / dt]
  const double px_mid = 0.25 * (s_left + c.s_right);
  const double dphi = 0.5 * (phi + c.phi_right_j1) - 0.5 * (c.phi_here_j + c.phi_right_j);
  return 24.0 * (2.0 * px_mid + (8.0 / 3.0) * pt_mid * pt_mid * pt_mid - dphi / c.dt);
}

TEST(CubicCoefficients, ZeroInputs) {
  const CubicCoefficients k = cubic_coefficients({0, 0, 0, 0, 0, 0, 0, 1.0, 1.0});
  EXPECT_EQ(k.c2, 0.0);
  EXPECT_EQ(k.c1, 30.0);
  EXPECT_EQ(k.c0, 0.0);
}

TEST(CubicCoefficients, SingleRightValue) {
  const CellInputs c{1.0, 0, 0, 0, 0, 0, 0, 1.0, 1.0};
  const CubicCoefficients k = cubic_coefficients(c);
  EXPECT_EQ(k.c2, 3.0);
  EXPECT_EQ(k.c1, 33.0);
  EXPECT_EQ(k.c0, 7.0);
  const double root = implicit_cell_oracle(c).outputs.p_t_new;
  EXPECT_NEAR(((root + k.c2) * root + k.c1) * root + k.c0, 0.0, 1e-12);
}

TEST(CubicCoefficients, MatchIndependentElimination) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int n = 0; n < 2000; ++n) {
    const CellInputs c = random_cell(rng);
    const CubicCoefficients k = cubic_coefficients(c);
    for (int t = 0; t < 3; ++t) {
      const double p = unit(rng);
      const double cubic = ((p + k.c2) * p + k.c1) * p + k.c0;
      const double scale = std::max({1.0, std::abs(k.c0), std::abs(k.c1), std::abs(k.c2)});
      EXPECT_NEAR(cubic, reduced_equation(c, p), 1e-12 * scale);
    }
  }
}

TEST(SolveCubic, UniqueRoot) { EXPECT_EQ(solve_cubic_select(0.0, 1.0, 0.0, 0.0), 0.0); }

TEST(SolveCubic, NearestOfThreeRoots) {
  EXPECT_NEAR(solve_cubic_select(0.0, -1.0, 0.0, 0.9), 1.0, 1e-15);
  EXPECT_NEAR(solve_cubic_select(0.0, -1.0, 0.0, -0.8), -1.0, 1e-15);
  EXPECT_NEAR(solve_cubic_select(0.0, -1.0, 0.0, 0.1), 0.0, 1e-15);
}

TEST(SolveCubic, TieGoesToLargerRoot) {
  // roots {-1, 0, 1}; reference 0.5 is equidistant from 0 and 1
  EXPECT_NEAR(solve_cubic_select(0.0, -1.0, 0.0, 0.5), 1.0, 1e-15);
}

TEST(SolveCubic, ResidualOnRandomCoefficients) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unit(-10.0, 10.0);
  for (int n = 0; n < 10000; ++n) {
    const double c2 = unit(rng), c1 = unit(rng), c0 = unit(rng), ref = unit(rng);
    const double p = solve_cubic_select(c2, c1, c0, ref);
    const double scale = std::max({1.0, std::abs(c2), std::abs(c1), std::abs(c0)});
    EXPECT_LT(std::abs(((p + c2) * p + c1) * p + c0), 1e-12 * scale) << c2 << ' ' << c1 << ' ' << c0;
  }
}

TEST(SolveCubic, NearestRootAgainstBruteForce) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int n = 0; n < 2000; ++n) {
    // P = (x - a)(x - b)(x - c) with known roots
    const double a = unit(rng), b = unit(rng), c = unit(rng), ref = unit(rng);
    const double c2 = -(a + b + c), c1 = a * b + b * c + a * c, c0 = -a * b * c;
    double expect = a;
    for (double r : {b, c}) {
      if (std::abs(r - ref) < std::abs(expect - ref)) expect = r;
    }
    // Skip near-degenerate clusters where the nearest root is ill-conditioned.
    if (std::min({std::abs(a - b), std::abs(b - c), std::abs(a - c)}) < 1e-3) continue;
    if (std::abs(std::abs(a - ref) - std::abs(b - ref)) < 1e-6 ||
        std::abs(std::abs(c - ref) - std::abs(b - ref)) < 1e-6 ||
        std::abs(std::abs(a - ref) - std::abs(c - ref)) < 1e-6)
      continue;
    EXPECT_NEAR(solve_cubic_select(c2, c1, c0, ref), expect, 1e-9);
  }
}

TEST(SolveCubic, RejectsNonFinite) {
  EXPECT_THROW(solve_cubic_select(NAN, 0.0, 0.0, 0.0), Error);
}

TEST(UpdatePhi, KnownValues) {
  EXPECT_EQ(update_phi({0, 0, 0, 0, 0, 0, 0, 1, 1}, 0.0), 0.0);
  EXPECT_EQ(update_phi({0, 0, 0, 1, 1, 1, 0, 1, 1}, 0.0), 1.0);
  // phi terms 1 - 0 + 0 = 1, S = 0.6, P = 0.4
  EXPECT_NEAR(update_phi({0.2, 0.2, 0.2, 1.0, 0.0, 0.0, 0, 0.1, 1.0}, 0.4), 0.9, 1e-15);
}

TEST(UpdateSx, KnownValues) {
  EXPECT_EQ(update_sx({0, 0, 0, 0, 0, 0, 0, 1, 1}, 0.0, 0.0), 0.0);
  EXPECT_EQ(update_sx({0, 0, 0, 0, 0, 0, 1.0, 1, 1}, 0.0, 0.0), 1.0);
}

TEST(UpdateSx, SatisfiesBalanceLaw) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int n = 0; n < 2000; ++n) {
    const CellInputs c = random_cell(rng);
    const double p = unit(rng), phi = unit(rng);
    const double s = update_sx(c, p, phi);
    const double lhs = (c.s_right - s) / (2.0 * c.dx) +
                       (0.5 * (p + c.p_t_right_j1) - 0.5 * (c.p_t_here_j + c.p_t_right_j)) / c.dt;
    const double rhs = 0.25 * (c.phi_right_j + c.phi_right_j1 + c.phi_here_j + phi);
    const double scale = std::max({1.0, std::abs(s) / c.dx, 1.0 / c.dt});
    EXPECT_NEAR(lhs, rhs, 1e-13 * scale);
  }
}

TEST(CellUpdate, ZeroIsFixedPoint) {
  const CellOutputs out = cell_update({0, 0, 0, 0, 0, 0, 0, 0.1, 0.01});
  EXPECT_EQ(out.p_t_new, 0.0);
  EXPECT_EQ(out.phi_new, 0.0);
  EXPECT_EQ(out.s_new, 0.0);
  const OracleSolution o = implicit_cell_oracle({0, 0, 0, 0, 0, 0, 0, 0.1, 0.01});
  EXPECT_LE(o.iterations, 1);
  EXPECT_EQ(o.outputs.p_t_new, 0.0);
}

TEST(CellUpdate, AgreesWithNewtonOracle) {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 10000; ++n) {
    const CellInputs c = random_cell(rng);
    const CellOutputs fast = cell_update(c);
    const OracleSolution slow = implicit_cell_oracle(c);
    EXPECT_NEAR(fast.p_t_new, slow.outputs.p_t_new, 1e-10);
    EXPECT_NEAR(fast.phi_new, slow.outputs.phi_new, 1e-10);
    EXPECT_NEAR(fast.s_new, slow.outputs.s_new, 1e-10);
    EXPECT_LT(slow.residual, 1e-13 * cell_scale(c, slow.outputs));
    const auto r = cell_residual(c, fast);
    const double worst = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    EXPECT_LT(worst, 1e-12 * cell_scale(c, fast));
  }
}

TEST(Tangent, ZeroAndLinearity) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const CellInputs c = random_cell(rng);
    const CellOutputs out = cell_update(c);
    const CellOutputVariation z = tangent_cell_update(c, out, {});
    EXPECT_EQ(z.p_t_new, 0.0);
    EXPECT_EQ(z.phi_new, 0.0);
    EXPECT_EQ(z.s_new, 0.0);
    const CellVariation v{unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)};
    const double a = 2.5 * unit(rng);
    const CellVariation av{a * v.p_t_right_j, a * v.p_t_right_j1, a * v.p_t_here_j, a * v.phi_right_j,
                           a * v.phi_right_j1, a * v.phi_here_j, a * v.s_right};
    const auto t1 = tangent_cell_update(c, out, v);
    const auto t2 = tangent_cell_update(c, out, av);
    const double scale = std::max({1.0, std::abs(t1.p_t_new), std::abs(t1.phi_new), std::abs(t1.s_new)});
    EXPECT_NEAR(t2.p_t_new, a * t1.p_t_new, 1e-12 * scale);
    EXPECT_NEAR(t2.phi_new, a * t1.phi_new, 1e-12 * scale);
    EXPECT_NEAR(t2.s_new, a * t1.s_new, 1e-12 * scale);
  }
}

TEST(Tangent, MatchesCentralFiniteDifferences) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> step(0.01, 1.0);
  const double eps = 1e-6;
  for (int n = 0; n < 500; ++n) {
    CellInputs c{unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng),
                 step(rng), step(rng)};
    const CellVariation v{unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)};
    const auto shifted = [&](double sign) {
      CellInputs d = c;
      d.p_t_right_j += sign * eps * v.p_t_right_j;
      d.p_t_right_j1 += sign * eps * v.p_t_right_j1;
      d.p_t_here_j += sign * eps * v.p_t_here_j;
      d.phi_right_j += sign * eps * v.phi_right_j;
      d.phi_right_j1 += sign * eps * v.phi_right_j1;
      d.phi_here_j += sign * eps * v.phi_here_j;
      d.s_right += sign * eps * v.s_right;
      return cell_update(d);
    };
    const CellOutputs plus = shifted(1.0), minus = shifted(-1.0);
    const auto t = tangent_cell_update(c, cell_update(c), v);
    const double fd[3] = {(plus.p_t_new - minus.p_t_new) / (2 * eps),
                          (plus.phi_new - minus.phi_new) / (2 * eps),
                          (plus.s_new - minus.s_new) / (2 * eps)};
    const double an[3] = {t.p_t_new, t.phi_new, t.s_new};
    const double scale = std::max({1.0, std::abs(an[0]), std::abs(an[1]), std::abs(an[2])});
    for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(fd[k] - an[k]) / scale, 1e-5);
  }
}

TEST(MarchColumn, ZeroColumnStaysZero) {
  const GridSpec grid(1.0, 4, 0.1, 6);
  const DWColumn left = march_column(boundary_column(grid), 0.0, 0.0, grid);
  EXPECT_EQ(left.i, 3);
  EXPECT_TRUE(left.has_shape(6));
  for (double v : left.p_t) EXPECT_EQ(v, 0.0);
  for (double v : left.phi) EXPECT_EQ(v, 0.0);
  for (double v : left.s_x) EXPECT_EQ(v, 0.0);
}

TEST(MarchColumn, EveryCellSatisfiesMidpointEquations) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const GridSpec grid(2.0, 20, 0.05, 40);
  DWColumn right = DWColumn::zeros(20, 40);
  for (double& v : right.p_t) v = unit(rng);
  for (double& v : right.phi) v = unit(rng);
  for (double& v : right.s_x) v = unit(rng);
  const DWColumn left = march_column(right, 0.3, -0.2, grid);
  EXPECT_EQ(left.p_t[0], 0.3);
  EXPECT_EQ(left.phi[0], -0.2);
  for (int j = 0; j < grid.n_t(); ++j) {
    const CellInputs c = gather_cell(right, left, j, grid.dx(), grid.dt());
    const auto k = static_cast<std::size_t>(j);
    const CellOutputs out{left.p_t[k + 1], left.phi[k + 1], left.s_x[k]};
    const auto r = cell_residual(c, out);
    for (double e : r) EXPECT_LT(std::abs(e), 1e-12 * cell_scale(c, out));
  }
}

TEST(MarchColumn, RejectsMismatchedShape) {
  const GridSpec grid(1.0, 4, 0.1, 6);
  EXPECT_THROW(march_column(DWColumn::zeros(4, 5), 0.0, 0.0, grid), Error);
}

TEST(Simulate, ZeroDataGivesZeroSnapshots) {
  const GridSpec grid(10.0, 32, 0.1, 20);
  const std::vector<double> u0(33, 0.0);
  SimulateOptions opts;
  opts.snapshot_steps = {0, 7, 20};
  const SimulationResult res = simulate(grid, u0, opts);
  ASSERT_EQ(res.snapshots.size(), 3u);
  for (const auto& s : res.snapshots) {
    for (double v : s.u) EXPECT_EQ(v, 0.0);
  }
  EXPECT_DOUBLE_EQ(res.snapshots[1].t, 0.7);
}

class SolitonRun : public ::testing::Test {
 protected:
  static SimulationResult run(int n_x, double dt, std::vector<int> steps, bool check = false) {
    const GridSpec grid = GridSpec::for_final_time(100.0, n_x, dt, 2.0);
    const SolitonParams p = SolitonParams::make(0.2, 50.0);
    const auto u0 = sakovich_profile(p, grid, 0.0, 1e-3).u;
    SimulateOptions opts;
    opts.snapshot_steps = std::move(steps);
    opts.boundary_tolerance = 1e-3;
    opts.check_residuals = check;
    return simulate(grid, u0, opts);
  }
};

TEST_F(SolitonRun, SnapshotAtZeroReproducesInitialData) {
  const GridSpec grid = GridSpec::for_final_time(100.0, 512, 0.05, 2.0);
  const auto u0 = sakovich_profile(SolitonParams::make(0.2, 50.0), grid, 0.0, 1e-3).u;
  const SimulationResult res = run(512, 0.05, {0}, true);
  EXPECT_EQ(res.snapshots[0].u.size(), u0.size());
  for (std::size_t i = 0; i + 1 < u0.size(); ++i) EXPECT_EQ(res.snapshots[0].u[i], u0[i]);
  EXPECT_LT(res.max_scaled_residual, 1e-12);
  EXPECT_GE(res.report.wall_seconds, 0.0);
  EXPECT_EQ(res.quadratic_by_step.size(), 41u);
}

TEST_F(SolitonRun, TraceMatchesStreamingRun) {
  const GridSpec grid = GridSpec::for_final_time(100.0, 256, 0.1, 2.0);
  const auto u0 = sakovich_profile(SolitonParams::make(0.2, 50.0), grid, 0.0, 1e-3).u;
  const Trace trace = march_trace(grid, u0, 1e-3);
  const SimulationResult res = run(256, 0.1, {20});
  for (int i = 0; i <= grid.n_x(); ++i) {
    EXPECT_EQ(res.snapshots[0].u[static_cast<std::size_t>(i)], 2.0 * trace[static_cast<std::size_t>(i)].p_t[20]);
  }
}

TEST(Simulate, RejectsOutOfRangeSnapshot) {
  const GridSpec grid(10.0, 8, 0.1, 4);
  SimulateOptions opts;
  opts.snapshot_steps = {5};
  EXPECT_THROW(simulate(grid, std::vector<double>(9, 0.0), opts), Error);
}

}  // namespace
}  // namespace spe
