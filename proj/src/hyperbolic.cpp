#include "kobalab/hyperbolic.hpp"

#include <cmath>

#include "kobalab/error.hpp"

namespace kobalab {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// (z - a) / (1 - conj(a) z) without the DiscPoint range check.
cplx transport(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }

}  // namespace

DiscPoint::DiscPoint(cplx value) : value_(value) {
  if (!finite(value)) throw Error("DiscPoint: non-finite value");
  if (!(std::abs(value) <= kMaxModulus)) {
    throw Error("DiscPoint: modulus must be < 1 (got " + std::to_string(std::abs(value)) + ")");
  }
}

double DiscPoint::modulus() const noexcept { return std::abs(value_); }

PoincareLength::PoincareLength(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) throw Error("PoincareLength: must be finite and >= 0");
}

double artanh_quotient(double m, double one_minus_m2) {
  if (m < 0.5) return std::atanh(m);
  // artanh m = log(1 + m) - 1/2 log(1 - m^2)
  return std::log1p(m) - 0.5 * std::log(one_minus_m2);
}

PoincareLength poincare_distance(DiscPoint z, DiscPoint w) {
  const cplx a = z.value();
  const cplx b = w.value();
  const double num = std::abs(a - b);
  if (num == 0.0) return PoincareLength(0.0);
  const double den = std::abs(1.0 - std::conj(b) * a);
  const double m = std::min(num / den, 1.0);
  const double ra = std::abs(a);
  const double rb = std::abs(b);
  const double q = ((1.0 - ra) * (1.0 + ra)) * ((1.0 - rb) * (1.0 + rb)) / (den * den);
  return PoincareLength(artanh_quotient(m, q));
}

DiscPoint mobius_transport(DiscPoint a, DiscPoint z) {
  const cplx r = transport(a.value(), z.value());
  if (!(std::abs(r) <= DiscPoint::kMaxModulus)) {
    throw Error("mobius_transport: image too close to the unit circle");
  }
  return DiscPoint(r);
}

SampledCurve disc_geodesic(DiscPoint z, DiscPoint w, std::size_t samples) {
  const ComplexPoint start{z.value()};
  const double length = poincare_distance(z, w);
  if (z == w || length == 0.0) return SampledCurve({0.0}, {start});
  if (samples < 2) throw Error("disc_geodesic: at least two samples required");

  // Move z to 0, walk the radius towards the image of w, move back.
  const cplx u = transport(z.value(), w.value());
  const cplx dir = u / std::abs(u);
  std::vector<double> params(samples);
  std::vector<ComplexPoint> points;
  points.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    params[i] = length * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (i == 0) {
      points.push_back(start);
    } else if (i + 1 == samples) {
      params[i] = length;
      points.push_back(ComplexPoint{w.value()});
    } else {
      const cplx xi = std::tanh(params[i]) * dir;
      points.push_back(ComplexPoint{transport(-z.value(), xi)});
    }
  }
  return SampledCurve(std::move(params), std::move(points));
}

}  // namespace kobalab
