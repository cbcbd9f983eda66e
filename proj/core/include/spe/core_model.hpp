#pragma once

// Continuous De Donder-Weyl description of the short pulse equation
//
//   u_xt = u + (1/6) (u^3)_xx,   u = phi_x,
//
// with polymomenta p^t = phi_x / 2, p^x = phi_t / 2 - phi_x^3 / 6 and
// Hamiltonian H = 2 p^x p^t + (2/3) (p^t)^4 - phi^2 / 2. The field equations
// take the matrix form beta_x dZ/dx + beta_t dZ/dt = grad_Z H on
// Z = (phi, p^x, p^t).

#include <span>
#include <vector>

#include <Eigen/Core>

#include "spe/grid.hpp"

namespace spe {

enum class Axis { x, t };

struct DWTriple {
  double phi = 0.0;
  double p_x = 0.0;
  double p_t = 0.0;
};

// A tangent vector (d phi, d p^x, d p^t) at a point of the DW phase space.
struct DWVariation {
  double d_phi = 0.0;
  double d_p_x = 0.0;
  double d_p_t = 0.0;
};

namespace detail {
struct StateTag {};
struct TangentTag {};
}  // namespace detail

// Marching state at spatial index i: p^t and phi on every time level
// j = 0..n_t, plus pair-sums s_j = p^x_{i,j} + p^x_{i,j+1} on every time
// interval j = 0..n_t-1. Individual p^x values are never formed.
template <class Tag>
struct BasicColumn {
  int i = 0;
  std::vector<double> p_t;
  std::vector<double> phi;
  std::vector<double> s_x;

  static BasicColumn zeros(int index, int n_t) {
    BasicColumn c;
    c.i = index;
    c.p_t.assign(static_cast<std::size_t>(n_t) + 1, 0.0);
    c.phi.assign(static_cast<std::size_t>(n_t) + 1, 0.0);
    c.s_x.assign(static_cast<std::size_t>(n_t), 0.0);
    return c;
  }

  int n_t() const noexcept { return static_cast<int>(s_x.size()); }

  bool has_shape(int n_t_expected) const noexcept {
    return static_cast<int>(s_x.size()) == n_t_expected &&
           static_cast<int>(p_t.size()) == n_t_expected + 1 &&
           static_cast<int>(phi.size()) == n_t_expected + 1;
  }
};

using DWColumn = BasicColumn<detail::StateTag>;
// Same layout, holding (d p^t, d phi, d s) along a linearized solution.
using TangentColumn = BasicColumn<detail::TangentTag>;

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> u;
};

struct Polymomenta {
  double p_t = 0.0;
  double p_x = 0.0;
};

struct FieldDerivatives {
  double phi_t = 0.0;
  double phi_x = 0.0;
};

struct BetaMatrices {
  Eigen::Matrix3d x;
  Eigen::Matrix3d t;
};

double dw_hamiltonian(const DWTriple& z);

// (dH/dphi, dH/dp^x, dH/dp^t).
Eigen::Vector3d dw_hamiltonian_gradient(const DWTriple& z);

Polymomenta polymomenta_from_derivatives(double phi_t, double phi_x);

// Inverse Legendre map read off the Hamiltonian equations:
// phi_x = 2 p^t, phi_t = 2 p^x + (8/3) (p^t)^3.
FieldDerivatives derivatives_from_polymomenta(double p_t, double p_x);

// beta_x = [[0,-1,0],[1,0,0],[0,0,0]], beta_t = [[0,0,-1],[0,0,0],[1,0,0]].
const BetaMatrices& beta_matrices();
const Eigen::Matrix3d& beta(Axis a);

// Max-entry magnitude of B_a B_b B_c + B_c B_b B_a + B_a d_bc + B_c d_ab.
double dkp_residual(Axis a, Axis b, Axis c);

// Polysymplectic two-form components evaluated on a pair of variations:
//   kappa^t(v1, v2) =   dp^t1 dphi2 - dp^t2 dphi1
//   kappa^x(v1, v2) = -(dp^x1 dphi2 - dp^x2 dphi1)
double kappa_eval(Axis component, const DWVariation& v1, const DWVariation& v2);

struct InitialRow {
  std::vector<double> p_t;
  std::vector<double> phi;
};

inline constexpr double kDefaultBoundaryTolerance = 1e-12;

// p^t_{i,0} = u0_i / 2 and phi_{i,0} = -int_{x_i}^{x_max} u0 dx by the
// cumulative trapezoid rule, so phi vanishes at the right boundary.
// Throws RightBoundaryNotVanishing when |u0[n_x]| > rel_tol * max|u0|.
InitialRow initial_row(std::span<const double> u0, const GridSpec& grid,
                       double rel_tol = kDefaultBoundaryTolerance);

DWColumn boundary_column(const GridSpec& grid);

}  // namespace spe
