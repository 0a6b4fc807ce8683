#pragma once

#include <vector>

#include "kobalab/hyperbolic.hpp"
#include "kobalab/point.hpp"

namespace kobalab {

/// Affine disc zeta -> center + zeta * direction, direction != 0.
class AnalyticDisc {
 public:
  AnalyticDisc(ComplexPoint center, ComplexPoint direction);

  std::size_t dim() const noexcept { return center_.dim(); }
  const ComplexPoint& center() const noexcept { return center_; }
  const ComplexPoint& direction() const noexcept { return direction_; }
  ComplexPoint operator()(cplx zeta) const;

  /// Same disc viewed in C^n via the zero-padding slice embedding.
  AnalyticDisc embedded(std::size_t n) const;

 private:
  ComplexPoint center_;
  ComplexPoint direction_;
};

struct ChainLink {
  AnalyticDisc disc;
  DiscPoint zeta_in;
  DiscPoint zeta_out;

  ComplexPoint start() const { return disc(zeta_in.value()); }
  ComplexPoint end() const { return disc(zeta_out.value()); }
};

/// Ordered links whose consecutive endpoints agree within the stitch tolerance
/// (relative to max(1, |point|)).
class DiscChain {
 public:
  static constexpr double kStitchTolerance = 1e-12;

  explicit DiscChain(std::vector<ChainLink> links);

  const std::vector<ChainLink>& links() const noexcept { return links_; }
  std::size_t size() const noexcept { return links_.size(); }
  std::size_t dim() const noexcept { return links_.front().disc.dim(); }
  ComplexPoint start() const { return links_.front().start(); }
  ComplexPoint end() const { return links_.back().end(); }

  /// This chain followed by `next`; the stitch tolerance applies at the joint.
  DiscChain concatenated(const DiscChain& next) const;
  DiscChain embedded(std::size_t n) const;

 private:
  std::vector<ChainLink> links_;
};

}  // namespace kobalab
