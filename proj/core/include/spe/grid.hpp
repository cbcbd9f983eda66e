#pragma once

#include <string>

namespace spe {

// Space-time lattice for the marching scheme: x_i = i*dx for i = 0..n_x,
// t_j = j*dt for j = 0..n_t. dx is computed once from x_max / n_x.
class GridSpec {
 public:
  // Throws Error(InvalidGrid) unless x_max > 0, n_x >= 2, dt > 0, n_t >= 1.
  GridSpec(double x_max, int n_x, double dt, int n_t);

  // Grid reaching t_final in whole steps of dt; t_final/dt must be integral
  // to within 1e-9 relative.
  static GridSpec for_final_time(double x_max, int n_x, double dt, double t_final);

  double x_max() const noexcept { return x_max_; }
  int n_x() const noexcept { return n_x_; }
  double dt() const noexcept { return dt_; }
  int n_t() const noexcept { return n_t_; }
  double dx() const noexcept { return dx_; }

  double x(int i) const noexcept { return i * dx_; }
  double t(int j) const noexcept { return j * dt_; }
  double t_final() const noexcept { return n_t_ * dt_; }

  std::string describe() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double x_max_;
  int n_x_;
  double dt_;
  int n_t_;
  double dx_;
};

}  // namespace spe
