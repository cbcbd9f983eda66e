#include "spe/grid.hpp"

#include <cmath>
#include <cstdio>

#include "spe/error.hpp"

namespace spe {

GridSpec::GridSpec(double x_max, int n_x, double dt, int n_t)
    : x_max_(x_max), n_x_(n_x), dt_(dt), n_t_(n_t), dx_(x_max / n_x) {
  if (!(std::isfinite(x_max) && x_max > 0.0)) {
    raise(ErrorCode::InvalidGrid, "x_max must be positive and finite");
  }
  if (n_x < 2) raise(ErrorCode::InvalidGrid, "n_x must be >= 2");
  if (!(std::isfinite(dt) && dt > 0.0)) {
    raise(ErrorCode::InvalidGrid, "dt must be positive and finite");
  }
  if (n_t < 1) raise(ErrorCode::InvalidGrid, "n_t must be >= 1");
}

GridSpec GridSpec::for_final_time(double x_max, int n_x, double dt, double t_final) {
  if (!(dt > 0.0) || !(t_final > 0.0)) {
    raise(ErrorCode::InvalidGrid, "dt and t_final must be positive");
  }
  const double steps = t_final / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    raise(ErrorCode::InvalidGrid, "t_final is not a whole number of time steps");
  }
  return GridSpec(x_max, n_x, dt, static_cast<int>(rounded));
}

std::string GridSpec::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "x_max=%.17g n_x=%d dx=%.17g dt=%.17g n_t=%d",
                x_max_, n_x_, dx_, dt_, n_t_);
  return buf;
}

}  // namespace spe
