#pragma once

// Fourier pseudo-spectral baseline on a periodic domain [0, x_max): the short
// pulse equation is integrated once in x to the evolution form
//
//   u_t = D^{-1} u + (1/6) D (u^3),
//
// with D^{-1} the zero-mean antiderivative, and advanced with classical RK4.

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "spe/core_model.hpp"
#include "spe/report.hpp"

namespace spe {

struct SpectralState {
  std::vector<double> u;
  double x_max = 1.0;
  double t = 0.0;
};

// Zero-mean tolerance: 1e-10 * max(1, max|u|).
double zero_mean_tolerance(std::span<const double> u);

// FFT-backed operators for one periodic grid. Holds its own transform plans
// and scratch space, so an instance must not be shared between threads.
class SpectralOperator {
 public:
  // Throws BadLength unless n is a power of two (n >= 2).
  SpectralOperator(int n, double x_max, bool dealias = false);
  ~SpectralOperator();
  SpectralOperator(const SpectralOperator&) = delete;
  SpectralOperator& operator=(const SpectralOperator&) = delete;
  SpectralOperator(SpectralOperator&&) noexcept;
  SpectralOperator& operator=(SpectralOperator&&) noexcept;

  int size() const noexcept;
  double x_max() const noexcept;

  // Mode k multiplied by i 2 pi k / x_max; the Nyquist derivative is zeroed.
  void dx(std::span<const double> u, std::span<double> out);
  // Mode k != 0 divided by i 2 pi k / x_max, mode 0 set to zero. Throws
  // NonZeroMean when |mean(u)| exceeds zero_mean_tolerance.
  void dx_inv(std::span<const double> u, std::span<double> out);
  // D^{-1} u + (1/6) D (u^3); the cube is optionally 2/3-rule filtered.
  void rhs(std::span<const double> u, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool is_power_of_two(long n);

std::vector<double> spectral_dx(std::span<const double> u, double x_max);
std::vector<double> spectral_dx_inv(std::span<const double> u, double x_max);
std::vector<double> spe_rhs(const SpectralState& state, bool dealias = false);

// One classical RK4 step of du/dt = f(u) where f(u, out) writes into out.
template <class Rhs>
SpectralState rk4_step(const SpectralState& state, double dt, Rhs&& f) {
  const std::size_t n = state.u.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
  f(std::span<const double>(state.u), std::span<double>(k1));
  for (std::size_t i = 0; i < n; ++i) stage[i] = state.u[i] + 0.5 * dt * k1[i];
  f(std::span<const double>(stage), std::span<double>(k2));
  for (std::size_t i = 0; i < n; ++i) stage[i] = state.u[i] + 0.5 * dt * k2[i];
  f(std::span<const double>(stage), std::span<double>(k3));
  for (std::size_t i = 0; i < n; ++i) stage[i] = state.u[i] + dt * k3[i];
  f(std::span<const double>(stage), std::span<double>(k4));

  SpectralState next{std::vector<double>(n), state.x_max, state.t + dt};
  for (std::size_t i = 0; i < n; ++i) {
    next.u[i] = state.u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

SpectralState rk4_step(const SpectralState& state, double dt, SpectralOperator& op);

struct SpectralConfig {
  double x_max = 100.0;
  int n = 1024;  // collocation points, power of two
  double dt = 0.01;
  int n_steps = 1;
  bool dealias = false;
};

struct SpectralResult {
  std::vector<FieldSnapshot> snapshots;  // periodic samples x_k = k x_max / n
  RunReport report;
};

// Fixed-step RK4 run. Initial data with a small mean (< 1e-6 relative) is
// de-meaned with a warning; larger means throw NonZeroMean. Throws
// InstabilityDetected when max|u| exceeds 1e3 times its initial value.
SpectralResult simulate_spectral(const SpectralConfig& cfg, std::span<const double> u0,
                                 const std::vector<int>& snapshot_steps);

}  // namespace spe
