#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "kobalab/point.hpp"

namespace kobalab {

/// Levi matrix convention used across the library: L(j, k) = d^2 f / dzbar_j dz_k,
/// so that the Levi form is L(v) = v^* L v.
using LeviMatrix = Eigen::MatrixXcd;

/// Real-valued function on C^n, optionally with analytic derivative suppliers.
///
/// The gradient supplier returns g_j = df/dx_j + i df/dy_j (z_j = x_j + i y_j);
/// its Euclidean norm is the norm of the real gradient in R^{2n}.
class ScalarField {
 public:
  using Evaluator = std::function<double(const ComplexPoint&)>;
  using GradientSupplier = std::function<std::vector<cplx>(const ComplexPoint&)>;
  using HessianSupplier = std::function<LeviMatrix(const ComplexPoint&)>;

  ScalarField(std::size_t dim, Evaluator f, GradientSupplier gradient = {},
              HessianSupplier levi = {}, std::string label = "custom");

  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  /// Evaluates f; throws on dimension mismatch or a non-finite value.
  double operator()(const ComplexPoint& z) const;

  bool has_gradient() const noexcept { return static_cast<bool>(gradient_); }
  bool has_levi() const noexcept { return static_cast<bool>(levi_); }
  std::vector<cplx> gradient(const ComplexPoint& z) const;
  LeviMatrix levi(const ComplexPoint& z) const;

 private:
  std::size_t dim_;
  Evaluator f_;
  GradientSupplier gradient_;
  HessianSupplier levi_;
  std::string label_;
};

/// f(z) = |z|^2.
ScalarField norm2_field(std::size_t dim);

/// f(z) = z^* A z + Re(z^T S z) + c with A Hermitian and S symmetric.
/// The S part is pluriharmonic, so the Levi matrix is exactly A.
ScalarField quadratic_field(const Eigen::MatrixXcd& hermitian, const Eigen::MatrixXcd& symmetric,
                            double constant = 0.0);

/// c * f for c > 0 (suppliers scaled accordingly).
ScalarField scaled(const ScalarField& f, double c);

/// f + g on the same dimension.
ScalarField sum(const ScalarField& f, const ScalarField& g);

}  // namespace kobalab
