#include "kobalab/point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kobalab/curve.hpp"
#include "kobalab/error.hpp"

namespace kobalab {

namespace {

void require_finite(const std::vector<cplx>& coords) {
  for (const auto& c : coords) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error("ComplexPoint: non-finite coordinate");
    }
  }
}

}  // namespace

ComplexPoint::ComplexPoint(std::size_t dim) : coords_(dim) {
  if (dim == 0) throw Error("ComplexPoint: dimension must be positive");
}

ComplexPoint::ComplexPoint(std::initializer_list<cplx> coords)
    : ComplexPoint(std::vector<cplx>(coords)) {}

ComplexPoint::ComplexPoint(std::vector<cplx> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error("ComplexPoint: dimension must be positive");
  require_finite(coords_);
}

ComplexPoint ComplexPoint::with(std::size_t j, cplx value) const {
  if (j >= dim()) throw Error("ComplexPoint::with: index out of range");
  auto copy = coords_;
  copy[j] = value;
  return ComplexPoint(std::move(copy));
}

double ComplexPoint::norm2() const noexcept {
  double s = 0.0;
  for (const auto& c : coords_) s += std::norm(c);
  return s;
}

double ComplexPoint::norm() const noexcept {
  // scaled to stay accurate for very small or very large coordinates
  const double m = max_abs();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& c : coords_) s += std::norm(c / m);
  return m * std::sqrt(s);
}

double ComplexPoint::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coords_) m = std::max(m, std::abs(c));
  return m;
}

ComplexPoint& ComplexPoint::operator+=(const ComplexPoint& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t j = 0; j < dim(); ++j) coords_[j] += other.coords_[j];
  require_finite(coords_);
  return *this;
}

ComplexPoint& ComplexPoint::operator-=(const ComplexPoint& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t j = 0; j < dim(); ++j) coords_[j] -= other.coords_[j];
  require_finite(coords_);
  return *this;
}

ComplexPoint& ComplexPoint::operator*=(cplx s) {
  for (auto& c : coords_) c *= s;
  require_finite(coords_);
  return *this;
}

ComplexPoint operator+(ComplexPoint a, const ComplexPoint& b) { return a += b; }
ComplexPoint operator-(ComplexPoint a, const ComplexPoint& b) { return a -= b; }
ComplexPoint operator*(cplx s, ComplexPoint a) { return a *= s; }
ComplexPoint operator*(ComplexPoint a, cplx s) { return a *= s; }

cplx inner(const ComplexPoint& a, const ComplexPoint& b) {
  require_same_dim(a, b, "inner");
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

double distance(const ComplexPoint& a, const ComplexPoint& b) { return (a - b).norm(); }

void require_same_dim(const ComplexPoint& a, const ComplexPoint& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw Error(std::string(where) + ": dimension mismatch (" + std::to_string(a.dim()) +
                " vs " + std::to_string(b.dim()) + ")");
  }
}

std::string to_string(const ComplexPoint& z) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t j = 0; j < z.dim(); ++j) {
    if (j) os << ", ";
    os << z[j].real();
    if (z[j].imag() != 0.0) os << (z[j].imag() < 0 ? "-" : "+") << std::abs(z[j].imag()) << 'i';
  }
  os << ')';
  return os.str();
}

SampledCurve::SampledCurve(std::vector<double> params, std::vector<ComplexPoint> points)
    : params_(std::move(params)), points_(std::move(points)) {
  if (params_.empty()) throw Error("SampledCurve: at least one sample required");
  if (params_.size() != points_.size()) throw Error("SampledCurve: params/points size mismatch");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!std::isfinite(params_[i])) throw Error("SampledCurve: non-finite parameter");
    if (i > 0 && !(params_[i] > params_[i - 1])) {
      throw Error("SampledCurve: parameters must be strictly increasing");
    }
    require_same_dim(points_[i], points_.front(), "SampledCurve");
  }
}

SampledCurve SampledCurve::reparametrized(double scale, double shift) const {
  if (!(scale > 0.0)) throw Error("SampledCurve::reparametrized: scale must be positive");
  std::vector<double> t(params_.size());
  std::transform(params_.begin(), params_.end(), t.begin(),
                 [&](double s) { return scale * s + shift; });
  return SampledCurve(std::move(t), points_);
}

}  // namespace kobalab
