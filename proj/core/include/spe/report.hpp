#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spe/grid.hpp"

namespace spe {

enum class Scheme { Polysymplectic, PseudoSpectral };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

// Summary of one integration run. For pseudo-spectral runs grid.n_x() is
// the number of periodic collocation points.
struct RunReport {
  Scheme scheme = Scheme::Polysymplectic;
  GridSpec grid{1.0, 2, 1.0, 1};
  std::map<double, double> sigma_by_time;
  double wall_seconds = 0.0;
  std::map<std::string, double> invariant_drift;
};

struct ConvergenceRow {
  double dx = 0.0;
  double dt = 0.0;
  double sigma_final = 0.0;
  double wall_seconds = 0.0;
  std::optional<double> measured_order;
  std::string error;  // non-empty when the level failed
};

struct ConvergenceTable {
  Scheme scheme = Scheme::Polysymplectic;
  std::vector<ConvergenceRow> rows;
};

}  // namespace spe
