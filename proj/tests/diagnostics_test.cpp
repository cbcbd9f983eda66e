#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spe/diagnostics.hpp"
#include "spe/error.hpp"

namespace spe {
namespace {

TEST(Sigma, KnownValues) {
  EXPECT_EQ(sigma_error({0.0, {1, 2, 3}}, {0.0, {1, 2, 3}}), 0.0);
  EXPECT_DOUBLE_EQ(sigma_error({0.0, {1, 1, 1, 1}}, {0.0, {0, 0, 0, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(sigma_error({0.0, {2, 0}}, {0.0, {0, 0}}), std::sqrt(2.0));
}

TEST(Sigma, ZeroOnSelfAndSymmetric) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    FieldSnapshot a{0.5, std::vector<double>(17)}, b{0.5, std::vector<double>(17)};
    for (double& v : a.u) v = unit(rng);
    for (double& v : b.u) v = unit(rng);
    EXPECT_EQ(sigma_error(a, a), 0.0);
    EXPECT_EQ(sigma_error(a, b), sigma_error(b, a));
  }
}

TEST(Sigma, Mismatch) {
  EXPECT_THROW(sigma_error({0.0, {1, 2}}, {0.0, {1, 2, 3}}), Error);
  EXPECT_THROW(sigma_error({0.0, {1, 2}}, {1.0, {1, 2}}), Error);
}

TEST(Quadratic, Trapezoid) {
  EXPECT_DOUBLE_EQ(quadratic_invariant({0.0, {0, 1, 0}}, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(quadratic_invariant({0.0, {1, 1, 1}}, 0.5), 1.0);
}

TEST(Drift, Series) {
  const std::vector<double> s{2.0, 2.1, 1.8};
  EXPECT_NEAR(max_relative_drift(s), 0.1, 1e-15);
  EXPECT_EQ(max_relative_drift(std::vector<double>{}), 0.0);
  EXPECT_NEAR(max_relative_drift(std::vector<double>{0.0, 0.3}), 0.3, 1e-15);
}

TEST(Floor, NonIncreasing) {
  EXPECT_TRUE(non_increasing_to_floor({1.0, 0.5, 0.25}));
  EXPECT_FALSE(non_increasing_to_floor({1.0, 0.5, 0.9, 0.1}));
  // small rise at the floor is tolerated
  EXPECT_TRUE(non_increasing_to_floor({1.0, 0.1, 0.011, 0.012, 0.01}));
}

class MslTest : public ::testing::Test {
 protected:
  GridSpec grid{100.0, 256, 0.05, 40};
  Trace base;
  void SetUp() override {
    const SolitonParams p = SolitonParams::make(0.2, 50.0);
    base = march_trace(grid, sakovich_profile(p, grid, 0.0, 1e-3).u, 1e-3);
  }
};

TEST_F(MslTest, ZeroTangentsGiveZero) {
  TangentSeed zero{std::vector<double>(257, 0.0), std::vector<double>(257, 0.0),
                   TangentColumn::zeros(256, 40)};
  const TangentTrace v = propagate_tangent(base, zero, grid);
  EXPECT_EQ(max_tangent_magnitude(v), 0.0);
  EXPECT_EQ(msl_residual(base, v, v, grid), 0.0);
}

TEST_F(MslTest, LinearizedSolutionsConserveTwoForm) {
  for (unsigned long s : {1ul, 2ul, 3ul}) {
    const TangentTrace v1 = propagate_tangent(base, random_tangent_seed(grid, 2 * s), grid);
    const TangentTrace v2 = propagate_tangent(base, random_tangent_seed(grid, 2 * s + 1), grid);
    EXPECT_LT(msl_residual(base, v1, v2, grid), 1e-12);
  }
}

TEST_F(MslTest, RandomFieldsViolateConservation) {
  const TangentTrace v1 = random_tangent_trace(grid, 5);
  const TangentTrace v2 = random_tangent_trace(grid, 6);
  EXPECT_GT(msl_residual(base, v1, v2, grid), 1e-6);
}

TEST_F(MslTest, SelfPairingVanishes) {
  const TangentTrace v = propagate_tangent(base, random_tangent_seed(grid, 9), grid);
  EXPECT_LT(msl_residual(base, v, v, grid), 1e-15);
}

TangentTrace scaled(TangentTrace v, double a) {
  for (auto& c : v) {
    for (double& x : c.p_t) x *= a;
    for (double& x : c.phi) x *= a;
    for (double& x : c.s_x) x *= a;
  }
  return v;
}

TEST_F(MslTest, ScalingIsQuadraticBeforeNormalization) {
  const TangentTrace v1 = random_tangent_trace(grid, 21);
  const TangentTrace v2 = random_tangent_trace(grid, 22);
  const TangentTrace w1 = scaled(v1, 3.0);
  const TangentTrace w2 = scaled(v2, 0.5);
  const double raw = msl_column_residual(v1[11], v1[10], v2[11], v2[10], grid);
  const double raw_scaled = msl_column_residual(w1[11], w1[10], w2[11], w2[10], grid);
  EXPECT_NEAR(raw_scaled, 1.5 * raw, 1e-12 * raw);
  const double norm = msl_residual(base, v1, v2, grid);
  EXPECT_NEAR(msl_residual(base, w1, w2, grid), norm, 1e-12 * norm);
}

TEST(MslGrids, ConservedForAnyStepRatio) {
  const SolitonParams p = SolitonParams::make(0.2, 40.0);
  for (const auto& [n_x, dt] : std::vector<std::pair<int, double>>{{64, 0.5}, {256, 0.01}, {512, 0.2}, {128, 0.001}}) {
    const GridSpec g(80.0, n_x, dt, 30);
    const Trace base = march_trace(g, sakovich_profile(p, g, 0.0, 1e-3).u, 1e-3);
    const TangentTrace v1 = propagate_tangent(base, random_tangent_seed(g, 1), g);
    const TangentTrace v2 = propagate_tangent(base, random_tangent_seed(g, 2), g);
    EXPECT_LT(msl_residual(base, v1, v2, g), 1e-12) << g.describe();
  }
}

TEST_F(MslTest, ShapeMismatch) {
  const TangentTrace v = propagate_tangent(base, random_tangent_seed(grid, 1), grid);
  TangentTrace shorter(v.begin(), v.end() - 1);
  EXPECT_THROW(msl_residual(base, v, shorter, grid), Error);
}

TEST(Convergence, SingleLevelHasNoOrder) {
  const ConvergenceTable t = convergence_study(Scheme::Polysymplectic, SolitonParams::make(0.2, 50.0),
                                               {{512, 0.05}}, 1.0, {100.0, 1e-3, 1, false});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_FALSE(t.rows[0].measured_order.has_value());
  EXPECT_TRUE(t.rows[0].error.empty());
  EXPECT_GT(t.rows[0].sigma_final, 0.0);
  EXPECT_LT(t.rows[0].sigma_final, 1e-2);
}

TEST(Convergence, FailedLevelIsRecorded) {
  // Tolerance 1e-12 cannot be met with the pulse at x_max / 2.
  const ConvergenceTable t = convergence_study(Scheme::Polysymplectic, SolitonParams::make(0.2, 50.0),
                                               {{256, 0.1}}, 1.0, {100.0, 1e-12, 1, false});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_FALSE(t.rows[0].error.empty());
  EXPECT_TRUE(sigmas(t).empty());
}

TEST(Convergence, OrderNearTwo) {
  const ConvergenceTable t = convergence_study(Scheme::Polysymplectic, SolitonParams::make(0.2, 50.0),
                                               {{1024, 0.02}, {2048, 0.01}}, 2.0, {100.0, 1e-3, 1, false});
  ASSERT_TRUE(t.rows[1].measured_order.has_value());
  EXPECT_NEAR(*t.rows[1].measured_order, 2.0, 0.7);
}

TEST(Compare, ZeroData) {
  const ComparisonReport r = compare_schemes_with([](double, double) { return 0.0; },
                                                  GridSpec(10.0, 16, 0.1, 5), 16);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].report.scheme, Scheme::Polysymplectic);
  EXPECT_EQ(r.rows[1].report.scheme, Scheme::PseudoSpectral);
  EXPECT_EQ(r.rows[0].sigma_final, 0.0);
  EXPECT_EQ(r.rows[1].sigma_final, 0.0);
}

}  // namespace
}  // namespace spe
