#pragma once

#include <vector>

#include "kobalab/point.hpp"

namespace kobalab {

/// Discretized curve sigma: [t_0, t_k] -> C^n. Parameters are strictly
/// increasing and there is one point per parameter. A single sample denotes the
/// constant curve on the degenerate interval [t_0, t_0].
class SampledCurve {
 public:
  SampledCurve(std::vector<double> params, std::vector<ComplexPoint> points);

  std::size_t size() const noexcept { return params_.size(); }
  std::size_t dim() const noexcept { return points_.front().dim(); }
  const std::vector<double>& params() const noexcept { return params_; }
  const std::vector<ComplexPoint>& points() const noexcept { return points_; }
  double t_begin() const { return params_.front(); }
  double t_end() const { return params_.back(); }
  double length_parameter() const { return params_.back() - params_.front(); }

  /// Shift and scale the parameter: t -> scale * t + shift (scale > 0).
  SampledCurve reparametrized(double scale, double shift) const;

 private:
  std::vector<double> params_;
  std::vector<ComplexPoint> points_;
};

}  // namespace kobalab
