#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cli.hpp"
#include "spe/core_model.hpp"
#include "spe/diagnostics.hpp"
#include "spe/exact.hpp"
#include "spe/io.hpp"
#include "spe/psi_scheme.hpp"
#include "spe/spectral.hpp"

namespace spe::cli {

namespace {

CheckResult bounded(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, format_number(value) + " <= " + format_number(limit)};
}

CellInputs random_cell(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_step(-3.0, 0.0);
  return {unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng),
          std::pow(10.0, log_step(rng)), std::pow(10.0, log_step(rng))};
}

}  // namespace

std::vector<CheckResult> verification_battery(unsigned long seed) {
  std::vector<CheckResult> checks;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  {
    double worst = 0.0;
    for (Axis a : {Axis::x, Axis::t})
      for (Axis b : {Axis::x, Axis::t})
        for (Axis c : {Axis::x, Axis::t}) worst = std::max(worst, dkp_residual(a, b, c));
    checks.push_back(bounded("dkp algebra (8 index triples)", worst, 1e-15));
  }

  {
    // beta_x Z_x + beta_t Z_t = grad H with Z_x, Z_t taken from the field equations.
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const DWTriple z{unit(rng), unit(rng), unit(rng)};
      const double phi_x_dpx = unit(rng);  // d p^x / dx
      const double dpt_dt = z.phi - phi_x_dpx;
      const FieldDerivatives d = derivatives_from_polymomenta(z.p_t, z.p_x);
      const Eigen::Vector3d zx(d.phi_x, phi_x_dpx, unit(rng));
      const Eigen::Vector3d zt(d.phi_t, unit(rng), dpt_dt);
      const Eigen::Vector3d lhs = beta(Axis::x) * zx + beta(Axis::t) * zt;
      worst = std::max(worst, (lhs - dw_hamiltonian_gradient(z)).cwiseAbs().maxCoeff());
    }
    checks.push_back(bounded("matrix form reproduces DW equations", worst, 1e-14));
  }

  {
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const CellInputs c = random_cell(rng);
      const CellOutputs fast = cell_update(c);
      const CellOutputs slow = implicit_cell_oracle(c).outputs;
      worst = std::max({worst, std::abs(fast.p_t_new - slow.p_t_new),
                        std::abs(fast.phi_new - slow.phi_new), std::abs(fast.s_new - slow.s_new)});
    }
    checks.push_back(bounded("closed-form cell vs Newton oracle (2000 cells)", worst, 1e-10));
  }

  const SolitonParams params = SolitonParams::make(0.2, 40.0);
  const GridSpec grid = GridSpec::for_final_time(80.0, 256, 0.05, 2.0);
  std::vector<double> u0(static_cast<std::size_t>(grid.n_x()) + 1);
  for (int i = 0; i <= grid.n_x(); ++i) u0[static_cast<std::size_t>(i)] = sakovich_u(params, grid.x(i), 0.0);

  {
    SimulateOptions opts;
    opts.boundary_tolerance = 1e-3;
    opts.check_residuals = true;
    const SimulationResult res = simulate(grid, u0, opts);
    checks.push_back(bounded("scheme residual on soliton run", res.max_scaled_residual, 1e-12));
  }

  {
    const Trace base = march_trace(grid, u0, 1e-3);
    const TangentTrace v1 = propagate_tangent(base, random_tangent_seed(grid, seed + 11), grid);
    const TangentTrace v2 = propagate_tangent(base, random_tangent_seed(grid, seed + 12), grid);
    checks.push_back(bounded("discrete conservation law, propagated tangents",
                             msl_residual(base, v1, v2, grid), 1e-12));
    const double off = msl_residual(base, random_tangent_trace(grid, seed + 13),
                                    random_tangent_trace(grid, seed + 14), grid);
    checks.push_back({"conservation law fails off-shell", off > 1e-6, format_number(off) + " > 1e-06"});
  }

  {
    const Certification cert = certify_sakovich(params, 1.0, 0.2, 3);
    checks.push_back({"exact soliton certified by PDE residual", cert.min_order >= 2.0,
                      "min order " + format_number(cert.min_order) + " >= 2"});
  }

  {
    const int n = 64;
    const double x_max = 10.0;
    std::vector<double> u(n);
    double worst = 0.0;
    const double k = 2.0 * std::numbers::pi / x_max;
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = std::sin(k * i * x_max / n);
    const auto du = spectral_dx(u, x_max);
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(du[static_cast<std::size_t>(i)] - k * std::cos(k * i * x_max / n)));
    }
    checks.push_back(bounded("spectral derivative of a single mode", worst, 1e-12));
  }
  return checks;
}

}  // namespace spe::cli
