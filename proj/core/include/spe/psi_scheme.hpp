#pragma once

// Polysymplectic box scheme for the short pulse equation.
//
// Each cell (i+1/2, j+1/2) carries the midpoint discretization of the DW
// equations
//
//   (s_{i+1} - s_i) / (2dx) + (pt_{i+1/2,j+1} - pt_{i+1/2,j}) / dt = phi_{i+1/2,j+1/2}
//   (phi_{i+1,j+1/2} - phi_{i,j+1/2}) / dx = 2 pt_{i+1/2,j+1/2}
//   (phi_{i+1/2,j+1} - phi_{i+1/2,j}) / dt = (s_i + s_{i+1}) / 2 + (8/3) pt_{i+1/2,j+1/2}^3
//
// where s_i = p^x_{i,j} + p^x_{i,j+1}. Knowing the corners (i+1,j),
// (i+1,j+1) and (i,j), the unknown corner (i,j+1) follows from a cubic in
// p^t and two linear updates. Columns are marched right to left.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "spe/core_model.hpp"
#include "spe/grid.hpp"
#include "spe/report.hpp"

namespace spe {

struct CellInputs {
  double p_t_right_j = 0.0;   // p^t_{i+1,j}
  double p_t_right_j1 = 0.0;  // p^t_{i+1,j+1}
  double p_t_here_j = 0.0;    // p^t_{i,j}
  double phi_right_j = 0.0;   // phi_{i+1,j}
  double phi_right_j1 = 0.0;  // phi_{i+1,j+1}
  double phi_here_j = 0.0;    // phi_{i,j}
  double s_right = 0.0;       // p^x_{i+1,j} + p^x_{i+1,j+1}
  double dx = 1.0;
  double dt = 1.0;
};

struct CellOutputs {
  double p_t_new = 0.0;  // p^t_{i,j+1}
  double phi_new = 0.0;  // phi_{i,j+1}
  double s_new = 0.0;    // p^x_{i,j} + p^x_{i,j+1}
};

// Variation of the seven known cell values (steps are not varied).
struct CellVariation {
  double p_t_right_j = 0.0;
  double p_t_right_j1 = 0.0;
  double p_t_here_j = 0.0;
  double phi_right_j = 0.0;
  double phi_right_j1 = 0.0;
  double phi_here_j = 0.0;
  double s_right = 0.0;
};

using CellOutputVariation = CellOutputs;

// Monic cubic P^3 + c2 P^2 + c1 P + c0 in P = p^t_{i,j+1}.
struct CubicCoefficients {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

CubicCoefficients cubic_coefficients(const CellInputs& c);

// Real root of the monic cubic nearest to `reference`; ties go to the larger
// root. Closed form followed by one Newton polish.
double solve_cubic_select(double c2, double c1, double c0, double reference);

double update_phi(const CellInputs& c, double p_t_new);
double update_sx(const CellInputs& c, double p_t_new, double phi_new);

CellOutputs cell_update(const CellInputs& c);

// Residuals of the three midpoint equations, each multiplied through by a
// step (min(dx,dt), dx and dt respectively) so that every term is of the
// size of the cell values.
std::array<double, 3> cell_residual(const CellInputs& c, const CellOutputs& out);

// max(1, max |cell inputs and outputs|).
double cell_scale(const CellInputs& c, const CellOutputs& out);

struct OracleOptions {
  int max_iterations = 100;
  int max_halvings = 40;
  double tolerance = 1e-13;  // relative to cell_scale
};

struct OracleSolution {
  CellOutputs outputs;
  int iterations = 0;
  double residual = 0.0;  // infinity norm of cell_residual
};

// Damped Newton solve of the raw midpoint equations, started from the
// values at (i,j). Throws NewtonDiverged.
OracleSolution implicit_cell_oracle(const CellInputs& c, const OracleOptions& opts = {});

// Linearization of the cell map at a solved cell. Throws SingularLinearization.
CellOutputVariation tangent_cell_update(const CellInputs& c, const CellOutputs& out,
                                        const CellVariation& v);

CellInputs gather_cell(const DWColumn& right, const DWColumn& left, int j, double dx,
                       double dt);

// Computes column i = right.i - 1 from the right neighbour and the initial
// row values at (i, 0). Cell errors are annotated with (i, j).
DWColumn march_column(const DWColumn& right, double p_t_0, double phi_0, const GridSpec& grid);

TangentColumn march_tangent_column(const DWColumn& base_right, const DWColumn& base_left,
                                   const TangentColumn& tangent_right, double d_p_t_0,
                                   double d_phi_0, const GridSpec& grid);

// All columns, indexed by spatial index (trace[i].i == i).
using Trace = std::vector<DWColumn>;
using TangentTrace = std::vector<TangentColumn>;

Trace march_trace(const GridSpec& grid, std::span<const double> u0,
                  double rel_tol = kDefaultBoundaryTolerance);

struct TangentSeed {
  std::vector<double> d_p_t_row;  // initial-row variations, length n_x + 1
  std::vector<double> d_phi_row;
  TangentColumn boundary;         // variation of the right boundary column
};

TangentTrace propagate_tangent(const Trace& base, const TangentSeed& seed, const GridSpec& grid);

struct SimulateOptions {
  std::vector<int> snapshot_steps;  // time indices j to record
  double boundary_tolerance = kDefaultBoundaryTolerance;
  bool check_residuals = false;  // evaluate cell_residual on every cell
  // Called with (right, left) after every column is completed.
  std::function<void(const DWColumn&, const DWColumn&)> on_column;
};

struct SimulationResult {
  std::vector<FieldSnapshot> snapshots;  // ordered as requested
  RunReport report;
  double max_scaled_residual = 0.0;  // max over cells of |residual| / scale
  std::vector<double> quadratic_by_step;  // int u^2 dx at every time level
};

// Only the current and previous column are resident while marching.
SimulationResult simulate(const GridSpec& grid, std::span<const double> u0,
                          const SimulateOptions& opts = {});

}  // namespace spe
