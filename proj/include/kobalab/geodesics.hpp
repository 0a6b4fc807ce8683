#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kobalab/curve.hpp"
#include "kobalab/kobayashi.hpp"

namespace kobalab {

enum class Verdict { pass, fail, indeterminate };
const char* to_string(Verdict v) noexcept;
/// fail dominates indeterminate, which dominates pass.
Verdict combine(Verdict a, Verdict b) noexcept;

/// Concatenated images of the Poincare geodesics zeta_in -> zeta_out of every
/// link (on the (1 - margin)-rescaled discs), parametrized by cumulative
/// Poincare length. Throws if a link is not certified.
SampledCurve build_chain_curve(const DomainOracle& domain, const DiscChain& chain, std::size_t samples_per_disc,
                               double margin = kDefaultMargin);

struct PairCheck {
  double s = 0.0;
  double t = 0.0;
  double lower = 0.0;
  std::optional<double> upper;
  double band_lo = 0.0;
  double band_hi = 0.0;
  Verdict verdict = Verdict::indeterminate;
};

struct SpeedCheck {
  double t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::indeterminate;
};

struct AlmostGeodesicVerdict {
  double lambda = 1.0;
  double kappa = 0.0;
  std::vector<PairCheck> pairs;
  std::vector<SpeedCheck> speeds;
  double delta_min = 0.0;
  Verdict condition_a = Verdict::pass;
  Verdict condition_b = Verdict::pass;
  Verdict overall = Verdict::pass;
};

struct GeodesicCheckOptions {
  /// Pairs are all pairs among the fewest evenly spaced nodes giving at least this many.
  std::size_t pair_samples = 12;
  /// Evenly spaced interior nodes for the speed condition.
  std::size_t velocity_samples = 8;
  SearchOptions search = default_search();
  static SearchOptions default_search() {
    SearchOptions s;
    s.budget = 4000;
    return s;
  }
  MetricOptions metric;
};

AlmostGeodesicVerdict check_almost_geodesic(const DomainOracle& domain, const SampledCurve& curve, double lambda,
                                            double kappa, const GeodesicCheckOptions& options = {});

struct VisibilityOptions {
  double r_nbhd = 0.05;
  /// Candidate endpoints are drawn from balls of this radius about p and q and
  /// used when within r_nbhd; defaults to r_nbhd.
  std::optional<double> pool_radius;
  double lambda = 1.0;
  double kappa = 0.2;
  std::size_t n_curves = 50;
  std::uint64_t seed = 0;
  /// Candidate endpoints keep at least this certified distance from the boundary.
  double boundary_floor = 1e-2;
  std::size_t samples_per_disc = 64;
  double margin = kDefaultMargin;
  GeodesicCheckOptions check;
};

struct VisibilityCurve {
  std::size_t index = 0;
  std::optional<ComplexPoint> start;
  std::optional<ComplexPoint> end;
  bool tested = false;
  bool chain_found = false;
  Verdict verdict = Verdict::indeterminate;
  double length = 0.0;
  double max_delta = 0.0;
  std::optional<SampledCurve> curve;
};

struct VisibilityReport {
  ComplexPoint p;
  ComplexPoint q;
  double r_nbhd = 0.0;
  double pool_radius = 0.0;
  double lambda = 1.0;
  double kappa = 0.0;
  std::size_t tested = 0;
  std::size_t passing = 0;
  std::optional<double> epsilon_star;
  std::vector<VisibilityCurve> curves;
};

VisibilityReport visibility_experiment(const DomainOracle& domain, const ComplexPoint& p, const ComplexPoint& q,
                                       const VisibilityOptions& options = {});

}  // namespace kobalab
