#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spe/core_model.hpp"
#include "spe/exact.hpp"
#include "spe/psi_scheme.hpp"
#include "spe/report.hpp"

namespace spe {

// sqrt(mean((u_num - u_ref)^2)). Throws LengthMismatch for differing lengths
// or times.
double sigma_error(const FieldSnapshot& u_num, const FieldSnapshot& u_ref);

// Trapezoidal int u^2 dx.
double quadratic_invariant(const FieldSnapshot& u, double dx);

// max_k |q_k - q_0| / |q_0| (absolute drift when q_0 == 0); 0 for empty input.
double max_relative_drift(std::span<const double> series);

// Discrete conservation law on one column pair, cells (i+1/2, j+1/2):
//
//   (w^t_{i+1/2,j+1} - w^t_{i+1/2,j}) / dt + (w^x_{i+1,j+1/2} - w^x_{i,j+1/2}) / dx
//
// with w^t = kappa^t of the x-averaged variations and w^x the two-form
// (1/2) dz ^ beta_x dz = -kappa^x of the t-averaged variations, whose p^x
// component is ds/2. Returns the max absolute value over the column's cells.
double msl_column_residual(const TangentColumn& v1_right, const TangentColumn& v1_left,
                           const TangentColumn& v2_right, const TangentColumn& v2_left,
                           const GridSpec& grid);

// Max over all cells of the column residual, normalized by the squared max
// tangent magnitude. Throws ShapeMismatch.
double msl_residual(const Trace& base, const TangentTrace& v1, const TangentTrace& v2,
                    const GridSpec& grid);

double max_tangent_magnitude(const TangentTrace& v);

// Random tangent seed for conservation tests (values uniform in [-1, 1]).
TangentSeed random_tangent_seed(const GridSpec& grid, unsigned long seed);

// Random tangent trace with the right shapes that is not a linearized
// solution; a negative control for msl_residual.
TangentTrace random_tangent_trace(const GridSpec& grid, unsigned long seed);

struct StudyLevel {
  int n_x = 0;
  double dt = 0.0;
};

struct StudyOptions {
  double x_max = 100.0;
  double boundary_tolerance = 1e-4;
  int repetitions = 1;  // timing is the median over repetitions
  bool dealias = false;
};

// Runs each level to t_final from the exact profile and records sigma at
// t_final against the exact profile. Failing levels are recorded with an
// error message and the study continues. measured_order is filled from
// successive sigma ratios against the dx ratio.
ConvergenceTable convergence_study(Scheme scheme, const SolitonParams& params,
                                   const std::vector<StudyLevel>& levels, double t_final,
                                   const StudyOptions& opts = {});

// Sigma values along a row of a table, ignoring failed levels.
std::vector<double> sigmas(const ConvergenceTable& table);

// True when every halving step either does not increase sigma or starts
// within `floor_factor` of the finest sigma.
bool non_increasing_to_floor(const std::vector<double>& sigma, double floor_factor = 2.0);

struct ComparisonRow {
  RunReport report;
  double sigma_final = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double t_final = 0.0;
  SolitonParams params;
};

// Head-to-head run of both schemes on the same pulse. `psi_grid` sets the
// marching lattice; the spectral run uses spectral_n periodic points over
// the same x_max and the same time step.
ComparisonReport compare_schemes(const SolitonParams& params, const GridSpec& psi_grid,
                                 int spectral_n, double t_final, const StudyOptions& opts = {});

using FieldFunction = std::function<double(double x, double t)>;

// Comparison against an arbitrary reference solution `exact(x, t)`, which
// also supplies the initial data.
ComparisonReport compare_schemes_with(const FieldFunction& exact, const GridSpec& psi_grid,
                                      int spectral_n, const StudyOptions& opts = {});

}  // namespace spe
