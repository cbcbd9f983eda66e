#include "spe/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spe/error.hpp"
#include "spe/spectral.hpp"

namespace spe {

SolitonParams SolitonParams::make(double m, double x0) {
  if (!(m > 0.0 && m < 1.0)) raise(ErrorCode::InvalidValue, "soliton m must lie in (0, 1)");
  if (!std::isfinite(x0)) raise(ErrorCode::InvalidValue, "soliton x0 must be finite");
  return {m, x0};
}

namespace {

struct Terms {
  double se, th, sin_psi, cos_psi, denom;
};

Terms terms(const SolitonParams& p, double y, double t, double n) {
  const double phase_env = p.m * (y + t);
  const double phase_osc = n * (y - t);
  Terms k;
  k.se = 1.0 / std::cosh(phase_env);
  k.th = std::tanh(phase_env);
  k.sin_psi = std::sin(phase_osc);
  k.cos_psi = std::cos(phase_osc);
  k.denom = p.m * p.m * k.sin_psi * k.sin_psi * k.se * k.se + n * n;
  return k;
}

double conjugate(const SolitonParams& p) { return std::sqrt(1.0 - p.m * p.m); }

}  // namespace

ParametricPoint sakovich_parametric(const SolitonParams& p, double y, double t) {
  const double m = p.m;
  const double n = conjugate(p);
  const Terms k = terms(p, y, t, n);
  const double sin2 = 2.0 * k.sin_psi * k.cos_psi;
  ParametricPoint pt;
  pt.x = y + 2.0 * m * n * (m * sin2 * k.se * k.se - 2.0 * n * k.th) / k.denom;
  pt.u = 4.0 * m * n * (m * k.sin_psi * k.th * k.se + n * k.cos_psi * k.se) / k.denom;
  return pt;
}

double sakovich_dxdy(const SolitonParams& p, double y, double t) {
  const double m = p.m;
  const double n = conjugate(p);
  const Terms k = terms(p, y, t, n);
  const double se2 = k.se * k.se;
  const double sin2 = 2.0 * k.sin_psi * k.cos_psi;
  const double cos2 = k.cos_psi * k.cos_psi - k.sin_psi * k.sin_psi;
  const double num = m * sin2 * se2 - 2.0 * n * k.th;
  const double d_num = 2.0 * m * n * cos2 * se2 - 2.0 * m * m * sin2 * se2 * k.th -
                       2.0 * m * n * se2;
  const double d_den = m * m * n * sin2 * se2 - 2.0 * m * m * m * k.sin_psi * k.sin_psi * se2 * k.th;
  return 1.0 + 2.0 * m * n * (d_num * k.denom - num * d_den) / (k.denom * k.denom);
}

double sakovich_invert(const SolitonParams& p, double x, double t) {
  const double m = p.m;
  const double n = conjugate(p);
  const double target = x - p.x0;
  // |x(y,t) - y| <= 2m^2/n + 4m.
  const double reach = 2.0 * m * m / n + 4.0 * m + 1.0;
  double lo = target - reach;
  double hi = target + reach;
  const auto f = [&](double y) { return sakovich_parametric(p, y, t).x - target; };
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    raise(ErrorCode::NonInvertibleParametrization,
          "no sign change bracketing x=" + std::to_string(x) + " at t=" + std::to_string(t));
  }

  const double y_tol = 1e-13 * std::max(1.0, std::abs(target));
  double y = 0.5 * (lo + hi);
  double last_width = hi - lo;
  for (int it = 0; it < 200 && hi - lo > y_tol; ++it) {
    double cand = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    // Bisect when the secant leaves the bracket or the bracket stopped halving.
    if (!(cand > lo && cand < hi) || hi - lo > 0.5 * last_width) {
      cand = 0.5 * (lo + hi);
    }
    last_width = hi - lo;
    const double fc = f(cand);
    y = cand;
    if (fc == 0.0) {
      lo = hi = cand;
      break;
    }
    if (fc < 0.0) {
      lo = cand;
      f_lo = fc;
    } else {
      hi = cand;
      f_hi = fc;
    }
  }
  y = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  if (sakovich_dxdy(p, y, t) <= 0.0) {
    raise(ErrorCode::NonInvertibleParametrization,
          "parametric map is not monotone near x=" + std::to_string(x));
  }
  return y;
}

double sakovich_u(const SolitonParams& p, double x, double t) {
  return sakovich_parametric(p, sakovich_invert(p, x, t), t).u;
}

FieldSnapshot sakovich_profile(const SolitonParams& p, const GridSpec& grid, double t,
                               double rel_tol) {
  FieldSnapshot snap;
  snap.t = t;
  snap.u.resize(static_cast<std::size_t>(grid.n_x()) + 1);
  double peak = 0.0;
  for (int i = 0; i <= grid.n_x(); ++i) {
    const double u = sakovich_u(p, grid.x(i), t);
    snap.u[static_cast<std::size_t>(i)] = u;
    peak = std::max(peak, std::abs(u));
  }
  if (std::abs(snap.u.back()) > rel_tol * peak) {
    raise(ErrorCode::RightBoundaryNotVanishing,
          "pulse reaches the right boundary: |u(x_max)| = " + std::to_string(std::abs(snap.u.back())));
  }
  return snap;
}

double pde_residual(const FieldPatch& u, double dx, double dt) {
  if (u.n_x() < 5 || u.n_t() < 5) {
    raise(ErrorCode::PatchTooSmall, "pde_residual needs at least 5x5 samples");
  }
  static constexpr double d1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};    // / 12h
  static constexpr double d2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};  // / 12h^2
  double worst = 0.0;
  for (int j = 2; j < u.n_t() - 2; ++j) {
    for (int i = 2; i < u.n_x() - 2; ++i) {
      double uxt = 0.0;
      double cube_xx = 0.0;
      for (int a = 0; a < 5; ++a) {
        const double v = u.at(i + a - 2, j);
        cube_xx += d2[a] * v * v * v;
        for (int b = 0; b < 5; ++b) uxt += d1[a] * d1[b] * u.at(i + a - 2, j + b - 2);
      }
      uxt /= 144.0 * dx * dt;
      cube_xx /= 12.0 * dx * dx;
      worst = std::max(worst, std::abs(uxt - u.at(i, j) - cube_xx / 6.0));
    }
  }
  return worst;
}

FieldPatch sakovich_patch(const SolitonParams& p, double x, double t, double h_x, double h_t,
                          int half_width) {
  const int n = 2 * half_width + 1;
  FieldPatch patch(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      patch.at(i, j) = sakovich_u(p, x + (i - half_width) * h_x, t + (j - half_width) * h_t);
    }
  }
  return patch;
}

Certification certify_sakovich(const SolitonParams& p, double t, double h0, int n_levels) {
  static constexpr double probes[] = {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0};
  Certification cert;
  double h = h0;
  for (int level = 0; level < n_levels; ++level, h *= 0.5) {
    double worst = 0.0;
    for (double offset : probes) {
      const double x = p.x0 - t + offset;  // follow the envelope
      worst = std::max(worst, pde_residual(sakovich_patch(p, x, t, h, h, 2), h, h));
    }
    cert.levels.push_back({h, worst});
  }
  cert.min_order = INFINITY;
  for (std::size_t k = 1; k < cert.levels.size(); ++k) {
    const double order = std::log2(cert.levels[k - 1].residual / cert.levels[k].residual);
    cert.min_order = std::min(cert.min_order, order);
  }
  if (cert.levels.size() < 2) cert.min_order = 0.0;
  return cert;
}

FieldSnapshot spectral_reference_profile(const SolitonParams& p, const GridSpec& grid, double t,
                                         double dt_ref) {
  const int n = grid.n_x();
  SpectralConfig cfg;
  cfg.x_max = grid.x_max();
  cfg.n = n;
  cfg.dt = dt_ref;
  cfg.n_steps = 0;
  if (t > 0.0) {
    const double steps = std::round(t / dt_ref);
    if (std::abs(steps * dt_ref - t) > 1e-9 * std::max(1.0, t)) {
      raise(ErrorCode::InvalidValue, "reference time is not a whole number of steps");
    }
    cfg.n_steps = static_cast<int>(steps);
  }
  std::vector<double> u0(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) u0[static_cast<std::size_t>(k)] = sakovich_u(p, k * cfg.x_max / n, 0.0);
  const SpectralResult run = simulate_spectral(cfg, u0, {cfg.n_steps});

  FieldSnapshot snap;
  snap.t = t;
  snap.u.resize(static_cast<std::size_t>(n) + 1);
  const auto& u = run.snapshots.front().u;
  for (int i = 0; i <= n; ++i) snap.u[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i % n)];
  return snap;
}

}  // namespace spe
