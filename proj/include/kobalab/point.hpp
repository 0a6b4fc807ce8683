#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace kobalab {

using cplx = std::complex<double>;

/// A point of C^n. Coordinates are always finite; the dimension is fixed at
/// construction and equals the coordinate count.
class ComplexPoint {
 public:
  ComplexPoint() = default;
  /// The origin of C^dim.
  explicit ComplexPoint(std::size_t dim);
  ComplexPoint(std::initializer_list<cplx> coords);
  explicit ComplexPoint(std::vector<cplx> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  const cplx& operator[](std::size_t j) const { return coords_[j]; }
  std::span<const cplx> coords() const noexcept { return coords_; }

  /// Copy with coordinate j replaced.
  ComplexPoint with(std::size_t j, cplx value) const;

  double norm() const noexcept;
  double norm2() const noexcept;
  double max_abs() const noexcept;

  ComplexPoint& operator+=(const ComplexPoint& other);
  ComplexPoint& operator-=(const ComplexPoint& other);
  ComplexPoint& operator*=(cplx s);

  friend bool operator==(const ComplexPoint&, const ComplexPoint&) = default;

 private:
  std::vector<cplx> coords_;
};

ComplexPoint operator+(ComplexPoint a, const ComplexPoint& b);
ComplexPoint operator-(ComplexPoint a, const ComplexPoint& b);
ComplexPoint operator*(cplx s, ComplexPoint a);
ComplexPoint operator*(ComplexPoint a, cplx s);

/// Hermitian inner product sum_j a_j conj(b_j).
cplx inner(const ComplexPoint& a, const ComplexPoint& b);
double distance(const ComplexPoint& a, const ComplexPoint& b);

/// Throws kobalab::Error unless both points have the same dimension.
void require_same_dim(const ComplexPoint& a, const ComplexPoint& b, const char* where);

std::string to_string(const ComplexPoint& z);

}  // namespace kobalab
