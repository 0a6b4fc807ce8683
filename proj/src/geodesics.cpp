#include "kobalab/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kobalab/error.hpp"
#include "kobalab/parallel.hpp"
#include "kobalab/random.hpp"

namespace kobalab {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

Verdict combine(Verdict a, Verdict b) noexcept {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::indeterminate || b == Verdict::indeterminate) return Verdict::indeterminate;
  return Verdict::pass;
}

SampledCurve build_chain_curve(const DomainOracle& domain, const DiscChain& chain, std::size_t samples_per_disc,
                               double margin) {
  if (samples_per_disc < 2) throw Error("build_chain_curve: need at least 2 samples per disc");
  chain_upper_bound(domain, chain, margin);
  const double rho = 1.0 - margin;
  std::vector<double> params;
  std::vector<ComplexPoint> points;
  double offset = 0.0;
  for (const auto& link : chain.links()) {
    const DiscPoint a(link.zeta_in.value() / rho);
    const DiscPoint b(link.zeta_out.value() / rho);
    if (a == b) continue;
    const SampledCurve g = disc_geodesic(a, b, samples_per_disc);
    // The first sample of every later link repeats the previous end point.
    for (std::size_t i = params.empty() ? 0 : 1; i < g.size(); ++i) {
      params.push_back(offset + g.params()[i]);
      points.push_back(link.disc(rho * g.points()[i][0]));
    }
    offset += g.t_end();
  }
  if (params.empty()) return SampledCurve({0.0}, {chain.start()});
  return SampledCurve(std::move(params), std::move(points));
}

AlmostGeodesicVerdict check_almost_geodesic(const DomainOracle& domain, const SampledCurve& curve, double lambda,
                                            double kappa, const GeodesicCheckOptions& options) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw Error("check_almost_geodesic: lambda must be >= 1");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw Error("check_almost_geodesic: kappa must be >= 0");
  if (curve.dim() != domain.dimension()) throw Error("check_almost_geodesic: dimension mismatch");
  AlmostGeodesicVerdict out;
  out.lambda = lambda;
  out.kappa = kappa;
  const auto& pts = curve.points();
  const auto& ts = curve.params();
  double delta_min = std::numeric_limits<double>::infinity();
  double sup_norm = 0.0;
  for (const auto& z : pts) {
    if (!domain.contains(z)) throw Error("check_almost_geodesic: curve point " + to_string(z) + " is not in the domain");
    delta_min = std::min(delta_min, domain.certified_radius(z));
    sup_norm = std::max(sup_norm, z.norm());
  }
  out.delta_min = delta_min;
  const std::size_t size = curve.size();
  if (size < 2) return out;

  std::size_t m = 2;
  while (m < size && m * (m - 1) / 2 < options.pair_samples) ++m;
  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t idx = static_cast<std::size_t>(std::llround(static_cast<double>(k) * static_cast<double>(size - 1) /
                                                                   static_cast<double>(m - 1)));
    if (nodes.empty() || nodes.back() != idx) nodes.push_back(idx);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) pairs.emplace_back(nodes[a], nodes[b]);

  out.pairs = parallel_map(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    PairCheck pc;
    pc.s = ts[i];
    pc.t = ts[j];
    const double gap = std::abs(pc.t - pc.s);
    pc.band_lo = gap / lambda - kappa;
    pc.band_hi = lambda * gap + kappa;
    SearchOptions so = options.search;
    so.seed = options.search.seed ^ stream_id("pair", k);
    const DistanceEstimate e = estimate_distance(domain, pts[i], pts[j], so);
    pc.lower = e.lower;
    pc.upper = e.upper;
    if (e.lower > pc.band_hi || (e.upper && *e.upper < pc.band_lo)) {
      pc.verdict = Verdict::fail;
    } else if (e.lower >= pc.band_lo && e.upper && *e.upper <= pc.band_hi) {
      pc.verdict = Verdict::pass;
    } else {
      pc.verdict = Verdict::indeterminate;
    }
    return pc;
  });

  // Speed at interior nodes; tolerance 2 |sigma|_inf h / delta_min.
  double h = 0.0;
  for (std::size_t i = 1; i < size; ++i) h = std::max(h, ts[i] - ts[i - 1]);
  const double tol = 2.0 * sup_norm * h / delta_min;
  std::vector<std::size_t> interior;
  if (size >= 3 && options.velocity_samples > 0) {
    const std::size_t count = std::min(options.velocity_samples, size - 2);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t idx = 1 + static_cast<std::size_t>(std::llround(
                                      static_cast<double>(k + 1) * static_cast<double>(size - 3) / static_cast<double>(count + 1)));
      if (interior.empty() || interior.back() != idx) interior.push_back(idx);
    }
  }
  out.speeds = parallel_map(interior.size(), [&](std::size_t k) {
    const std::size_t i = interior[k];
    SpeedCheck sc;
    sc.t = ts[i];
    sc.tolerance = tol;
    const ComplexPoint v = (1.0 / (ts[i + 1] - ts[i - 1])) * (pts[i + 1] - pts[i - 1]);
    if (v.norm() == 0.0) {
      sc.verdict = Verdict::pass;
      return sc;
    }
    const MetricEstimate me = infinitesimal_bounds(domain, pts[i], v, options.metric);
    sc.lower = me.lower;
    sc.upper = me.upper;
    if (me.upper <= lambda + tol) {
      sc.verdict = Verdict::pass;
    } else if (me.lower > lambda + tol) {
      sc.verdict = Verdict::fail;
    } else {
      sc.verdict = Verdict::indeterminate;
    }
    return sc;
  });

  for (const auto& p : out.pairs) out.condition_a = combine(out.condition_a, p.verdict);
  for (const auto& s : out.speeds) out.condition_b = combine(out.condition_b, s.verdict);
  out.overall = combine(out.condition_a, out.condition_b);
  return out;
}

namespace {

std::optional<ComplexPoint> draw_endpoint(const DomainOracle& domain, const ComplexPoint& center, double radius,
                                          double floor, CounterRng& rng) {
  for (int tries = 0; tries < 20000; ++tries) {
    const ComplexPoint z = center + rng.ball_point(domain.dimension(), radius);
    if (domain.certified_radius(z) < floor) continue;
    if (domain.contains(z)) return z;
  }
  return std::nullopt;
}

}  // namespace

VisibilityReport visibility_experiment(const DomainOracle& domain, const ComplexPoint& p, const ComplexPoint& q,
                                       const VisibilityOptions& options) {
  require_same_dim(p, q, "visibility_experiment");
  if (p.dim() != domain.dimension()) throw Error("visibility_experiment: dimension mismatch");
  if (!(options.r_nbhd > 0.0)) throw Error("visibility_experiment: neighborhood radius must be positive");
  if (!(distance(p, q) > 2.0 * options.r_nbhd)) {
    throw Error("visibility_experiment: neighborhoods of p and q must be disjoint (|p - q| > 2 r_nbhd)");
  }
  const double pool = options.pool_radius.value_or(options.r_nbhd);
  if (!(pool >= options.r_nbhd)) throw Error("visibility_experiment: pool radius must be >= r_nbhd");

  VisibilityReport rep;
  rep.p = p;
  rep.q = q;
  rep.r_nbhd = options.r_nbhd;
  rep.pool_radius = pool;
  rep.lambda = options.lambda;
  rep.kappa = options.kappa;
  rep.curves = parallel_map(options.n_curves, [&](std::size_t i) {
    VisibilityCurve row;
    row.index = i;
    CounterRng rng(options.seed, stream_id("visibility", i));
    row.start = draw_endpoint(domain, p, pool, options.boundary_floor, rng);
    row.end = draw_endpoint(domain, q, pool, options.boundary_floor, rng);
    if (!row.start || !row.end) return row;
    row.tested = distance(*row.start, p) <= options.r_nbhd && distance(*row.end, q) <= options.r_nbhd;
    if (!row.tested) return row;
    SearchOptions so = options.check.search;
    so.margin = options.margin;
    so.seed = options.seed ^ stream_id("visibility-search", i);
    const UpperBound ub = search_upper_bound(domain, *row.start, *row.end, so);
    if (!ub.chain) return row;
    row.chain_found = true;
    const SampledCurve curve = build_chain_curve(domain, *ub.chain, options.samples_per_disc, options.margin);
    row.length = curve.length_parameter();
    for (const auto& z : curve.points()) row.max_delta = std::max(row.max_delta, domain.certified_radius(z));
    GeodesicCheckOptions co = options.check;
    co.search.seed = so.seed;
    row.verdict = check_almost_geodesic(domain, curve, options.lambda, options.kappa, co).overall;
    row.curve = curve;
    return row;
  });
  for (const auto& c : rep.curves) {
    if (!c.tested) continue;
    ++rep.tested;
    if (c.verdict != Verdict::pass) continue;
    ++rep.passing;
    rep.epsilon_star = std::min(rep.epsilon_star.value_or(c.max_delta), c.max_delta);
  }
  return rep;
}

}  // namespace kobalab
