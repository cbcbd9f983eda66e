#pragma once

// Sakovich smooth pulse solution of u_xt = u + (1/6)(u^3)_xx, given in
// parametric form with phi = m (y + t), psi = n (y - t), n = sqrt(1 - m^2):
//
//   u(y,t) = 4mn (m sin(psi) sinh(phi) + n cos(psi) cosh(phi)) / D
//   x(y,t) = y + 2mn (m sin(2 psi) - n sinh(2 phi)) / D
//   D      = m^2 sin^2(psi) + n^2 cosh^2(phi)
//
// The pulse is single valued (x monotone in y) for m < sin(pi/8).

#include <cstddef>
#include <vector>

#include "spe/core_model.hpp"
#include "spe/grid.hpp"

namespace spe {

struct SolitonParams {
  double m = 0.2;
  double x0 = 0.0;  // pulse centre at t = 0, in grid coordinates

  // Throws InvalidValue unless 0 < m < 1.
  static SolitonParams make(double m, double x0 = 0.0);
};

struct ParametricPoint {
  double x = 0.0;
  double u = 0.0;
};

// Evaluates the parametric map at auxiliary coordinate y (x excludes x0).
ParametricPoint sakovich_parametric(const SolitonParams& p, double y, double t);

// dx/dy of the parametric map.
double sakovich_dxdy(const SolitonParams& p, double y, double t);

// Solves x(y, t) = x - x0 for y. Throws NonInvertibleParametrization when the
// bracket fails or the map is not monotone at the root.
double sakovich_invert(const SolitonParams& p, double x, double t);

double sakovich_u(const SolitonParams& p, double x, double t);

// Samples sakovich_u on every grid point x_i = i * dx. Throws
// RightBoundaryNotVanishing when |u(x_max)| > rel_tol * max|u|.
FieldSnapshot sakovich_profile(const SolitonParams& p, const GridSpec& grid, double t,
                               double rel_tol = kDefaultBoundaryTolerance);

// Space-time samples, i over x and j over t: at(i, j).
class FieldPatch {
 public:
  FieldPatch(int n_x, int n_t) : n_x_(n_x), n_t_(n_t), data_(static_cast<std::size_t>(n_x) * n_t) {}

  int n_x() const noexcept { return n_x_; }
  int n_t() const noexcept { return n_t_; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(j) * n_x_ + i]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(j) * n_x_ + i]; }

 private:
  int n_x_;
  int n_t_;
  std::vector<double> data_;
};

// Max-norm of u_xt - u - (u^3)_xx / 6 over interior points, using fourth
// order central differences. Throws PatchTooSmall below 5x5 samples.
double pde_residual(const FieldPatch& u, double dx, double dt);

// Samples sakovich_u on a (2k+1) x (2k+1) patch centred on (x, t).
FieldPatch sakovich_patch(const SolitonParams& p, double x, double t, double h_x, double h_t,
                          int half_width);

struct CertificationLevel {
  double h = 0.0;
  double residual = 0.0;
};

struct Certification {
  std::vector<CertificationLevel> levels;
  double min_order = 0.0;  // smallest observed order between successive levels
};

// Refinement study of pde_residual on patches across the pulse: sampling
// step h, h/2, ... Residual at each level is the max over the probe points.
Certification certify_sakovich(const SolitonParams& p, double t, double h0, int n_levels);

// Quasi-exact fallback reference: pseudo-spectral run from the t = 0 profile
// with time step dt_ref on the periodic version of `grid`, sampled at x_i.
// Requires grid.n_x() to be a power of two.
FieldSnapshot spectral_reference_profile(const SolitonParams& p, const GridSpec& grid, double t,
                                         double dt_ref);

}  // namespace spe
