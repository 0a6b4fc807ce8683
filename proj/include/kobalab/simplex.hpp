#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kobalab {

struct SimplexOptions {
  std::size_t max_evaluations = 200;
  double initial_step = 0.1;
  /// Per-coordinate initial steps; overrides initial_step when non-empty.
  std::vector<double> initial_steps;
  /// Stop when the spread of simplex values and the simplex diameter are both below these.
  double value_tolerance = 1e-12;
  double point_tolerance = 1e-10;
};

struct SimplexResult {
  std::vector<double> x;
  double value;
  std::size_t evaluations;
};

/// Nelder-Mead minimization. The objective may return +inf for infeasible
/// points; `stop` (optional) is polled before each evaluation.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const SimplexOptions& options, const std::function<bool()>& stop = {});

}  // namespace kobalab
