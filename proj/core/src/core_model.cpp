#include "spe/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spe/error.hpp"

namespace spe {

double dw_hamiltonian(const DWTriple& z) {
  const double pt2 = z.p_t * z.p_t;
  return 2.0 * z.p_x * z.p_t + (2.0 / 3.0) * pt2 * pt2 - 0.5 * z.phi * z.phi;
}

Eigen::Vector3d dw_hamiltonian_gradient(const DWTriple& z) {
  return {-z.phi, 2.0 * z.p_t, 2.0 * z.p_x + (8.0 / 3.0) * z.p_t * z.p_t * z.p_t};
}

Polymomenta polymomenta_from_derivatives(double phi_t, double phi_x) {
  return {0.5 * phi_x, 0.5 * phi_t - phi_x * phi_x * phi_x / 6.0};
}

FieldDerivatives derivatives_from_polymomenta(double p_t, double p_x) {
  return {2.0 * p_x + (8.0 / 3.0) * p_t * p_t * p_t, 2.0 * p_t};
}

const BetaMatrices& beta_matrices() {
  static const BetaMatrices betas = [] {
    BetaMatrices b;
    b.x << 0, -1, 0,
           1,  0, 0,
           0,  0, 0;
    b.t << 0, 0, -1,
           0, 0,  0,
           1, 0,  0;
    return b;
  }();
  return betas;
}

const Eigen::Matrix3d& beta(Axis a) {
  return a == Axis::x ? beta_matrices().x : beta_matrices().t;
}

double dkp_residual(Axis a, Axis b, Axis c) {
  const auto delta = [](Axis p, Axis q) { return p == q ? 1.0 : 0.0; };
  const Eigen::Matrix3d& ba = beta(a);
  const Eigen::Matrix3d& bb = beta(b);
  const Eigen::Matrix3d& bc = beta(c);
  const Eigen::Matrix3d lhs = ba * bb * bc + bc * bb * ba;
  const Eigen::Matrix3d rhs = -ba * delta(b, c) - bc * delta(a, b);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double kappa_eval(Axis component, const DWVariation& v1, const DWVariation& v2) {
  if (component == Axis::t) {
    return v1.d_p_t * v2.d_phi - v2.d_p_t * v1.d_phi;
  }
  return -(v1.d_p_x * v2.d_phi - v2.d_p_x * v1.d_phi);
}

InitialRow initial_row(std::span<const double> u0, const GridSpec& grid, double rel_tol) {
  const auto n = static_cast<std::size_t>(grid.n_x()) + 1;
  if (u0.size() != n) {
    raise(ErrorCode::BadLength, "initial data has " + std::to_string(u0.size()) +
                                    " samples, grid needs " + std::to_string(n));
  }
  double peak = 0.0;
  for (double v : u0) {
    if (!std::isfinite(v)) raise(ErrorCode::InvalidValue, "initial data is not finite");
    peak = std::max(peak, std::abs(v));
  }
  const double right = u0.back();
  if (std::abs(right) > rel_tol * peak) {
    raise(ErrorCode::RightBoundaryNotVanishing,
          "|u0(x_max)| = " + std::to_string(std::abs(right)) + " exceeds " +
              std::to_string(rel_tol) + " * max|u0|");
  }

  InitialRow row;
  row.p_t.resize(n);
  row.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) row.p_t[i] = 0.5 * u0[i];

  const double half_dx = 0.5 * grid.dx();
  row.phi[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) {
    row.phi[k] = row.phi[k + 1] - half_dx * (u0[k] + u0[k + 1]);
  }
  return row;
}

DWColumn boundary_column(const GridSpec& grid) {
  return DWColumn::zeros(grid.n_x(), grid.n_t());
}

}  // namespace spe
