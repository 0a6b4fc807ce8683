#pragma once

// Poincare-disc primitives. Throughout the library the Poincare distance is
// normalized as p(z, w) = artanh |(z - w) / (1 - conj(w) z)|, which is exactly
// the Kobayashi distance of the unit disc; chain costs therefore compose with
// no conversion factor.

#include <cstddef>

#include "kobalab/curve.hpp"
#include "kobalab/point.hpp"

namespace kobalab {

/// A point of the open unit disc. Moduli up to kMaxModulus are admitted so that
/// artanh stays finite.
class DiscPoint {
 public:
  static constexpr double kMaxModulus = 1.0 - 1e-15;

  explicit DiscPoint(cplx value);
  DiscPoint(double re) : DiscPoint(cplx(re, 0.0)) {}  // NOLINT(google-explicit-constructor)

  cplx value() const noexcept { return value_; }
  double modulus() const noexcept;

  friend bool operator==(const DiscPoint&, const DiscPoint&) = default;

 private:
  cplx value_;
};

/// Non-negative finite length in Poincare units.
class PoincareLength {
 public:
  explicit PoincareLength(double value);
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

 private:
  double value_;
};

PoincareLength poincare_distance(DiscPoint z, DiscPoint w);

/// The disc automorphism z -> (z - a) / (1 - conj(a) z), sending a to 0.
DiscPoint mobius_transport(DiscPoint a, DiscPoint z);

/// Geodesic from z to w sampled at `samples` equally spaced Poincare arclength
/// values on [0, p(z, w)]. Points live in C^1. Endpoints are exactly z and w.
/// For z == w the constant curve on [0, 0] (a single sample) is returned.
SampledCurve disc_geodesic(DiscPoint z, DiscPoint w, std::size_t samples);

/// artanh of a Mobius quotient m in [0, 1), accurate for both small m and m
/// close to 1 when one_minus_m2 = 1 - m^2 is supplied from a product form.
double artanh_quotient(double m, double one_minus_m2);

}  // namespace kobalab
