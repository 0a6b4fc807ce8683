#include "kobalab/field.hpp"

#include <cmath>

#include "kobalab/error.hpp"

namespace kobalab {

ScalarField::ScalarField(std::size_t dim, Evaluator f, GradientSupplier gradient,
                         HessianSupplier levi, std::string label)
    : dim_(dim),
      f_(std::move(f)),
      gradient_(std::move(gradient)),
      levi_(std::move(levi)),
      label_(std::move(label)) {
  if (dim_ == 0) throw Error("ScalarField: dimension must be positive");
  if (!f_) throw Error("ScalarField: evaluator required");
}

double ScalarField::operator()(const ComplexPoint& z) const {
  if (z.dim() != dim_) throw Error("ScalarField '" + label_ + "': dimension mismatch");
  const double v = f_(z);
  if (!std::isfinite(v)) throw Error("ScalarField '" + label_ + "': non-finite value at " + to_string(z));
  return v;
}

std::vector<cplx> ScalarField::gradient(const ComplexPoint& z) const {
  if (!gradient_) throw Error("ScalarField '" + label_ + "': no analytic gradient");
  if (z.dim() != dim_) throw Error("ScalarField '" + label_ + "': dimension mismatch");
  return gradient_(z);
}

LeviMatrix ScalarField::levi(const ComplexPoint& z) const {
  if (!levi_) throw Error("ScalarField '" + label_ + "': no analytic Levi matrix");
  if (z.dim() != dim_) throw Error("ScalarField '" + label_ + "': dimension mismatch");
  return levi_(z);
}

ScalarField norm2_field(std::size_t dim) {
  return ScalarField(
      dim, [](const ComplexPoint& z) { return z.norm2(); },
      [](const ComplexPoint& z) {
        std::vector<cplx> g(z.coords().begin(), z.coords().end());
        for (auto& c : g) c *= 2.0;
        return g;
      },
      [dim](const ComplexPoint&) -> LeviMatrix { return LeviMatrix::Identity(dim, dim); }, "norm2");
}

ScalarField quadratic_field(const Eigen::MatrixXcd& hermitian, const Eigen::MatrixXcd& symmetric,
                            double constant) {
  const auto n = hermitian.rows();
  if (n == 0 || hermitian.cols() != n || symmetric.rows() != n || symmetric.cols() != n) {
    throw Error("quadratic_field: matrices must be square and of equal size");
  }
  if (!hermitian.isApprox(hermitian.adjoint(), 1e-14)) throw Error("quadratic_field: A must be Hermitian");
  if (!symmetric.isApprox(symmetric.transpose(), 1e-14)) throw Error("quadratic_field: S must be symmetric");
  const Eigen::MatrixXcd a = hermitian;
  const Eigen::MatrixXcd s = symmetric;
  auto vec = [](const ComplexPoint& z) {
    Eigen::VectorXcd v(z.dim());
    for (std::size_t j = 0; j < z.dim(); ++j) v(j) = z[j];
    return v;
  };
  return ScalarField(
      static_cast<std::size_t>(n),
      [a, s, constant, vec](const ComplexPoint& z) {
        const Eigen::VectorXcd v = vec(z);
        const cplx herm = v.adjoint() * a * v;
        const cplx sym = v.transpose() * s * v;
        return herm.real() + sym.real() + constant;
      },
      [a, s, vec](const ComplexPoint& z) {
        // g = 2 df/dzbar; df/dzbar_j = (A v)_j + conj((S v)_j)
        const Eigen::VectorXcd v = vec(z);
        const Eigen::VectorXcd av = a * v;
        const Eigen::VectorXcd sv = s * v;
        std::vector<cplx> g(z.dim());
        for (std::size_t j = 0; j < z.dim(); ++j) g[j] = 2.0 * (av(j) + std::conj(sv(j)));
        return g;
      },
      [a](const ComplexPoint&) -> LeviMatrix { return a; }, "quadratic");
}

ScalarField scaled(const ScalarField& f, double c) {
  if (!(c > 0.0)) throw Error("scaled: factor must be positive");
  ScalarField::GradientSupplier g;
  ScalarField::HessianSupplier h;
  if (f.has_gradient()) {
    g = [f, c](const ComplexPoint& z) {
      auto v = f.gradient(z);
      for (auto& x : v) x *= c;
      return v;
    };
  }
  if (f.has_levi()) h = [f, c](const ComplexPoint& z) -> LeviMatrix { return c * f.levi(z); };
  return ScalarField(f.dim(), [f, c](const ComplexPoint& z) { return c * f(z); }, g, h,
                     f.label() + "*c");
}

ScalarField sum(const ScalarField& f, const ScalarField& g) {
  if (f.dim() != g.dim()) throw Error("sum: dimension mismatch");
  ScalarField::GradientSupplier grad;
  ScalarField::HessianSupplier levi;
  if (f.has_gradient() && g.has_gradient()) {
    grad = [f, g](const ComplexPoint& z) {
      auto a = f.gradient(z);
      const auto b = g.gradient(z);
      for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
      return a;
    };
  }
  if (f.has_levi() && g.has_levi()) {
    levi = [f, g](const ComplexPoint& z) -> LeviMatrix { return f.levi(z) + g.levi(z); };
  }
  return ScalarField(f.dim(), [f, g](const ComplexPoint& z) { return f(z) + g(z); }, grad, levi,
                     f.label() + "+" + g.label());
}

}  // namespace kobalab
