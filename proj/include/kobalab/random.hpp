#pragma once

#include <cstdint>
#include <string_view>

#include "kobalab/point.hpp"

namespace kobalab {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so results never depend on task scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;
  /// Uniform point of the open unit disc.
  cplx disc_point(double radius = 1.0) noexcept;
  /// Uniform point of the Euclidean ball of C^n (as R^{2n}) with given radius.
  ComplexPoint ball_point(std::size_t dim, double radius = 1.0) noexcept;
  /// Uniform point of the unit sphere of C^n.
  ComplexPoint sphere_point(std::size_t dim) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stable 64-bit hash of a label, used to derive per-experiment streams.
std::uint64_t stream_id(std::string_view label, std::uint64_t index = 0) noexcept;

}  // namespace kobalab
