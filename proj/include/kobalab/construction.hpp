#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kobalab/analytic_disc.hpp"
#include "kobalab/hyperbolic.hpp"
#include "kobalab/point.hpp"

namespace kobalab {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);

/// Real rational point of R^2 inside C^2.
struct RationalPoint2 {
  Rational z1;
  Rational z2;

  ComplexPoint to_point() const;
  bool operator==(const RationalPoint2&) const = default;
};

/// X_nu = {z2 = slope*z1 + intercept, |z1| <= radius}.
struct LadderSegment {
  std::size_t index;
  Rational slope;
  Rational intercept;
  Rational radius;

  bool contains(const RationalPoint2& p) const;
  /// |z2 - slope*z1 - intercept| for a floating point sample.
  double line_residual(const ComplexPoint& z) const;
};

/// a_nu = 1/a_base^(nu+1), b_nu = 1/b_base^(nu+1). Bases other than (4, 2)
/// exist for fault injection only.
class SibonyLadder {
 public:
  explicit SibonyLadder(std::size_t depth, unsigned a_base = 4, unsigned b_base = 2);

  std::size_t depth() const noexcept { return depth_; }
  bool is_standard() const noexcept { return a_base_ == 4 && b_base_ == 2; }
  unsigned a_base() const noexcept { return a_base_; }
  unsigned b_base() const noexcept { return b_base_; }

  /// Valid for nu >= 1 (any nu, not only nu <= depth).
  Rational a(std::size_t nu) const;
  Rational b(std::size_t nu) const;
  Rational slope(std::size_t nu) const { return a(nu + 1) + a(nu); }
  Rational intercept(std::size_t nu) const { return -a(nu) * a(nu + 1); }

  LadderSegment segment(std::size_t nu) const;
  RationalPoint2 point(std::size_t nu) const;
  /// phi_nu at a real rational parameter.
  RationalPoint2 phi_exact(std::size_t nu, const Rational& zeta) const;
  ComplexPoint phi(std::size_t nu, DiscPoint zeta) const;
  AnalyticDisc disc(std::size_t nu) const;
  /// Single-link chain x_nu -> x_{nu+1} through phi_nu.
  DiscChain link(std::size_t nu) const;

 private:
  std::size_t depth_;
  unsigned a_base_;
  unsigned b_base_;
};

ComplexPoint ladder_point(std::size_t nu);
ComplexPoint phi(std::size_t nu, DiscPoint zeta);

struct LadderCheck {
  std::string item;  // "a", "b" or "c"
  std::string description;
  bool passed = true;
  std::vector<std::string> witnesses;
};

struct LadderReport {
  std::size_t depth = 0;
  std::vector<LadderCheck> checks;

  bool all_passed() const;
  const LadderCheck& check(const std::string& item) const;
};

LadderReport verify_ladder(const SibonyLadder& ladder);
LadderReport verify_ladder(std::size_t depth);

struct ChainTermRow {
  std::size_t nu;
  double a;
  double b;
  double term;
  double partial_sum;
  /// Certified bound on sum_{j >= nu} term(j).
  double tail_bound;
};

struct ChainTermTable {
  std::vector<ChainTermRow> rows;
  double ratio;           // ratio used in the geometric tail
  double observed_ratio;  // max term(nu+1)/term(nu) over the window
  std::size_t window_begin;
  std::size_t window_end;

  std::string csv() const;
};

ChainTermTable chain_table(const SibonyLadder& ladder, double ratio_floor = 0.51);
ChainTermTable chain_table(std::size_t depth, double ratio_floor = 0.51);

}  // namespace kobalab
