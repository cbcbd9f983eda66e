#include "spe/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include <fftw3.h>

#include "spe/diagnostics.hpp"
#include "spe/error.hpp"

namespace spe {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double mean_of(std::span<const double> u) {
  return std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
}

double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

bool is_power_of_two(long n) { return n >= 1 && (n & (n - 1)) == 0; }

double zero_mean_tolerance(std::span<const double> u) {
  return 1e-10 * std::max(1.0, max_abs(u));
}

struct SpectralOperator::Impl {
  int n;
  double x_max;
  bool dealias;
  int n_modes;
  double* real_buf;
  fftw_complex* spec_buf;
  fftw_plan forward;
  fftw_plan backward;
  std::vector<double> cube;
  std::vector<double> wavenumber;

  Impl(int n_, double x_max_, bool dealias_)
      : n(n_), x_max(x_max_), dealias(dealias_), n_modes(n_ / 2 + 1) {
    real_buf = fftw_alloc_real(static_cast<std::size_t>(n));
    spec_buf = fftw_alloc_complex(static_cast<std::size_t>(n_modes));
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_r2c_1d(n, real_buf, spec_buf, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(n, spec_buf, real_buf, FFTW_ESTIMATE);
    }
    cube.resize(static_cast<std::size_t>(n));
    wavenumber.resize(static_cast<std::size_t>(n_modes));
    for (int k = 0; k < n_modes; ++k) {
      wavenumber[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / x_max;
    }
  }

  ~Impl() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
    }
    fftw_free(real_buf);
    fftw_free(spec_buf);
  }

  void to_modes(std::span<const double> u) {
    std::copy(u.begin(), u.end(), real_buf);
    fftw_execute(forward);
  }

  // Inverse transform including the 1/n normalization.
  void from_modes(std::span<double> out) {
    fftw_execute(backward);
    const double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = real_buf[i] * scale;
  }

  // Multiplies each mode by i k (derivative) in place.
  void apply_derivative() {
    for (int k = 0; k < n_modes; ++k) {
      const double kk = wavenumber[static_cast<std::size_t>(k)];
      const double re = spec_buf[k][0];
      const double im = spec_buf[k][1];
      spec_buf[k][0] = -kk * im;
      spec_buf[k][1] = kk * re;
    }
    spec_buf[n / 2][0] = 0.0;
    spec_buf[n / 2][1] = 0.0;
  }

  void apply_antiderivative() {
    spec_buf[0][0] = 0.0;
    spec_buf[0][1] = 0.0;
    for (int k = 1; k < n_modes; ++k) {
      const double kk = wavenumber[static_cast<std::size_t>(k)];
      const double re = spec_buf[k][0];
      const double im = spec_buf[k][1];
      // (re + i im) / (i kk) = im / kk - i re / kk
      spec_buf[k][0] = im / kk;
      spec_buf[k][1] = -re / kk;
    }
  }

  void truncate_two_thirds() {
    const int cutoff = n / 3;
    for (int k = cutoff + 1; k < n_modes; ++k) {
      spec_buf[k][0] = 0.0;
      spec_buf[k][1] = 0.0;
    }
  }
};

SpectralOperator::SpectralOperator(int n, double x_max, bool dealias) {
  if (n < 2 || !is_power_of_two(n)) {
    raise(ErrorCode::BadLength, "spectral grid size " + std::to_string(n) + " is not a power of two");
  }
  if (!(x_max > 0.0)) raise(ErrorCode::InvalidValue, "x_max must be positive");
  impl_ = std::make_unique<Impl>(n, x_max, dealias);
}

SpectralOperator::~SpectralOperator() = default;
SpectralOperator::SpectralOperator(SpectralOperator&&) noexcept = default;
SpectralOperator& SpectralOperator::operator=(SpectralOperator&&) noexcept = default;

int SpectralOperator::size() const noexcept { return impl_->n; }
double SpectralOperator::x_max() const noexcept { return impl_->x_max; }

namespace {

void check_lengths(int n, std::span<const double> u, std::span<double> out) {
  if (static_cast<int>(u.size()) != n || static_cast<int>(out.size()) != n) {
    raise(ErrorCode::BadLength, "field length does not match spectral grid of " + std::to_string(n));
  }
}

}  // namespace

void SpectralOperator::dx(std::span<const double> u, std::span<double> out) {
  check_lengths(impl_->n, u, out);
  impl_->to_modes(u);
  impl_->apply_derivative();
  impl_->from_modes(out);
}

void SpectralOperator::dx_inv(std::span<const double> u, std::span<double> out) {
  check_lengths(impl_->n, u, out);
  const double mean = mean_of(u);
  if (std::abs(mean) > zero_mean_tolerance(u)) {
    raise(ErrorCode::NonZeroMean, "mean " + std::to_string(mean) + " has no periodic antiderivative");
  }
  impl_->to_modes(u);
  impl_->apply_antiderivative();
  impl_->from_modes(out);
}

void SpectralOperator::rhs(std::span<const double> u, std::span<double> out) {
  check_lengths(impl_->n, u, out);
  Impl& s = *impl_;
  for (std::size_t i = 0; i < u.size(); ++i) s.cube[i] = u[i] * u[i] * u[i];
  s.to_modes(s.cube);
  if (s.dealias) s.truncate_two_thirds();
  s.apply_derivative();
  s.from_modes(s.cube);
  dx_inv(u, out);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] += s.cube[i] / 6.0;
}

std::vector<double> spectral_dx(std::span<const double> u, double x_max) {
  SpectralOperator op(static_cast<int>(u.size()), x_max);
  std::vector<double> out(u.size());
  op.dx(u, out);
  return out;
}

std::vector<double> spectral_dx_inv(std::span<const double> u, double x_max) {
  SpectralOperator op(static_cast<int>(u.size()), x_max);
  std::vector<double> out(u.size());
  op.dx_inv(u, out);
  return out;
}

std::vector<double> spe_rhs(const SpectralState& state, bool dealias) {
  SpectralOperator op(static_cast<int>(state.u.size()), state.x_max, dealias);
  std::vector<double> out(state.u.size());
  op.rhs(state.u, out);
  return out;
}

SpectralState rk4_step(const SpectralState& state, double dt, SpectralOperator& op) {
  return rk4_step(state, dt, [&op](std::span<const double> u, std::span<double> out) {
    op.rhs(u, out);
  });
}

SpectralResult simulate_spectral(const SpectralConfig& cfg, std::span<const double> u0,
                                 const std::vector<int>& snapshot_steps) {
  if (!(cfg.dt > 0.0)) raise(ErrorCode::InvalidValue, "dt must be positive");
  if (cfg.n_steps < 0) raise(ErrorCode::InvalidValue, "n_steps must be non-negative");
  if (static_cast<int>(u0.size()) != cfg.n) {
    raise(ErrorCode::BadLength, "initial data length does not match n");
  }
  for (int j : snapshot_steps) {
    if (j < 0 || j > cfg.n_steps) {
      raise(ErrorCode::InvalidValue, "snapshot step " + std::to_string(j) + " outside run");
    }
  }
  SpectralOperator op(cfg.n, cfg.x_max, cfg.dealias);

  SpectralState state{std::vector<double>(u0.begin(), u0.end()), cfg.x_max, 0.0};
  const double mean = mean_of(state.u);
  const double peak0 = max_abs(state.u);
  if (std::abs(mean) > zero_mean_tolerance(state.u)) {
    if (std::abs(mean) < 1e-6 * std::max(1.0, peak0)) {
      warn("pseudo-spectral initial data has mean " + std::to_string(mean) + "; removing it");
      for (double& v : state.u) v -= mean;
    } else {
      raise(ErrorCode::NonZeroMean, "initial data mean " + std::to_string(mean) + " is too large");
    }
  }

  SpectralResult result;
  result.snapshots.resize(snapshot_steps.size());
  std::vector<double> quadratic;
  quadratic.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
  const double h = cfg.x_max / cfg.n;
  const auto record = [&](int step) {
    for (std::size_t s = 0; s < snapshot_steps.size(); ++s) {
      if (snapshot_steps[s] == step) result.snapshots[s] = {step * cfg.dt, state.u};
    }
    double q = 0.0;
    for (double v : state.u) q += v * v;
    quadratic.push_back(q * h);
  };

  const double limit = 1e3 * std::max(peak0, 1e-300);
  const auto start = std::chrono::steady_clock::now();
  record(0);
  for (int step = 1; step <= cfg.n_steps; ++step) {
    state = rk4_step(state, cfg.dt, op);
    const double peak = max_abs(state.u);
    if (!(peak <= limit) && peak0 > 0.0) {
      raise(ErrorCode::InstabilityDetected,
            "max|u| grew to " + std::to_string(peak) + " at step " + std::to_string(step));
    }
    state.t = step * cfg.dt;
    record(step);
  }
  const auto stop = std::chrono::steady_clock::now();

  result.report.scheme = Scheme::PseudoSpectral;
  result.report.grid = GridSpec(cfg.x_max, cfg.n, cfg.dt, std::max(cfg.n_steps, 1));
  result.report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  result.report.invariant_drift["quadratic"] = max_relative_drift(quadratic);
  return result;
}

}  // namespace spe
