#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kobalab/construction.hpp"
#include "kobalab/error.hpp"
#include "kobalab/geodesics.hpp"
#include "kobalab/random.hpp"
#include "oracles.hpp"

using namespace kobalab;

namespace {

DiscChain axis_chain(double from, double to) {
  return DiscChain({ChainLink{AnalyticDisc(ComplexPoint(2), {1.0, 0.0}), DiscPoint(from), DiscPoint(to)}});
}

GeodesicCheckOptions quick_check() {
  GeodesicCheckOptions o;
  o.pair_samples = 6;
  o.velocity_samples = 4;
  o.search.budget = 2000;
  return o;
}

}  // namespace

TEST_CASE("embedded disc geodesic in the bidisc") {
  const auto bidisc = unit_polydisc(2);
  const SampledCurve c = build_chain_curve(*bidisc, axis_chain(0.0, 0.5), 1000, 1e-9);
  CHECK(c.length_parameter() == doctest::Approx(std::atanh(0.5)).epsilon(1e-6));
  CHECK(c.length_parameter() == doctest::Approx(chain_upper_bound(*bidisc, axis_chain(0.0, 0.5), 1e-9)).epsilon(1e-12));
  for (const auto& z : c.points()) {
    CHECK(std::abs(z[1]) == 0.0);
    CHECK(std::abs(z[0].imag()) < 1e-15);
  }
  CHECK(std::abs(c.points().back()[0] - cplx(0.5)) < 1e-12);
}

TEST_CASE("ladder link curve") {
  const auto bidisc = unit_polydisc(2);
  const SibonyLadder ladder(4);
  const SampledCurve c = build_chain_curve(*bidisc, ladder.link(1), 1000, 1e-9);
  CHECK(c.length_parameter() == doctest::Approx(0.192831).epsilon(1e-5));
  CHECK(c.length_parameter() == doctest::Approx(std::atanh(4.0 / 21.0)).epsilon(1e-7));
  CHECK(distance(c.points().front(), ladder_point(1)) < 1e-12);
  CHECK(distance(c.points().back(), ladder_point(2)) < 1e-12);
  // Every sample lies on the affine line carrying X_1.
  const auto seg = ladder.segment(1);
  for (const auto& z : c.points()) CHECK(std::abs(z[1] - to_double(seg.slope) * z[0] - to_double(seg.intercept)) < 1e-12);
}

TEST_CASE("two-link chain curve length is the chain cost") {
  const auto bidisc = unit_polydisc(2);
  const SibonyLadder ladder(4);
  const DiscChain chain = ladder.link(1).concatenated(ladder.link(2));
  const SampledCurve c = build_chain_curve(*bidisc, chain, 1000, 1e-3);
  CHECK(c.length_parameter() == doctest::Approx(chain_upper_bound(*bidisc, chain, 1e-3)).epsilon(1e-9));
  CHECK(c.size() == 1999);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c.params()[i] > c.params()[i - 1]);
}

TEST_CASE("degenerate link gives a constant curve") {
  const auto bidisc = unit_polydisc(2);
  const SampledCurve c = build_chain_curve(*bidisc, axis_chain(0.3, 0.3), 10);
  CHECK(c.size() == 1);
  CHECK(c.length_parameter() == 0.0);
  const auto v = check_almost_geodesic(*bidisc, c, 1.0, 0.0);
  CHECK(v.overall == Verdict::pass);
}

TEST_CASE("uncertified chain is rejected") {
  const auto ball = unit_ball(2);
  const DiscChain chain({ChainLink{AnalyticDisc(ComplexPoint(2), {1.0, 1.0}), DiscPoint(0.0), DiscPoint(0.5)}});
  CHECK_THROWS_AS(build_chain_curve(*ball, chain, 10), Error);
  CHECK_THROWS_AS(build_chain_curve(*unit_polydisc(2), axis_chain(0.0, 0.5), 1), Error);
}

TEST_CASE("geodesic passes with slack, is indeterminate without") {
  const auto bidisc = unit_polydisc(2);
  // A larger margin inflates the parameter past K, which the search then certifies.
  const SampledCurve c = build_chain_curve(*bidisc, axis_chain(0.0, 0.5), 200, 1e-11);
  const auto ok = check_almost_geodesic(*bidisc, c, 1.0, 0.01, quick_check());
  CHECK(ok.condition_a == Verdict::pass);
  CHECK(ok.condition_b == Verdict::pass);
  CHECK(ok.overall == Verdict::pass);
  CHECK(ok.pairs.size() >= 6);
  CHECK(ok.speeds.size() == 4);

  const auto tight = check_almost_geodesic(*bidisc, c, 1.0, 0.0, quick_check());
  CHECK(tight.condition_a == Verdict::indeterminate);
  std::size_t undecided = 0;
  for (const auto& p : tight.pairs) {
    CHECK(p.verdict != Verdict::fail);
    if (p.verdict == Verdict::indeterminate) ++undecided;
  }
  CHECK(undecided > 0);

  const SampledCurve inflated = build_chain_curve(*bidisc, axis_chain(0.0, 0.5), 200, 1e-3);
  CHECK(check_almost_geodesic(*bidisc, inflated, 1.0, 0.0, quick_check()).condition_a == Verdict::fail);
  CHECK(check_almost_geodesic(*bidisc, inflated, 1.0, 0.01, quick_check()).overall == Verdict::pass);
}

TEST_CASE("euclidean segment in the ball is a certified failure") {
  const auto ball = unit_ball(2);
  std::vector<double> ts;
  std::vector<ComplexPoint> pts;
  for (int i = 0; i <= 180; ++i) {
    const double t = 0.01 * i;
    ts.push_back(t);
    pts.push_back(ComplexPoint{-0.9 + t, 0.0});
  }
  const SampledCurve seg(ts, pts);
  const auto v = check_almost_geodesic(*ball, seg, 1.0, 0.1, quick_check());
  CHECK(v.condition_a == Verdict::fail);
  CHECK(v.overall == Verdict::fail);
  bool endpoints_fail = false;
  for (const auto& p : v.pairs) {
    if (p.s == 0.0 && std::abs(p.t - 1.8) < 1e-12) {
      endpoints_fail = p.verdict == Verdict::fail;
      CHECK(p.lower == doctest::Approx(2.0 * std::atanh(0.9)).epsilon(1e-9));
    }
  }
  CHECK(endpoints_fail);
}

TEST_CASE("checker preconditions") {
  const auto ball = unit_ball(2);
  const SampledCurve inside({0.0, 1.0}, {ComplexPoint{0.0, 0.0}, ComplexPoint{0.5, 0.0}});
  CHECK_THROWS_AS(check_almost_geodesic(*ball, inside, 0.5, 0.1), Error);
  CHECK_THROWS_AS(check_almost_geodesic(*ball, inside, 1.0, -0.1), Error);
  const SampledCurve outside({0.0, 1.0}, {ComplexPoint{0.0, 0.0}, ComplexPoint{1.5, 0.0}});
  CHECK_THROWS_AS(check_almost_geodesic(*ball, outside, 1.0, 0.1), Error);
}

TEST_CASE("shifting the parameter leaves pair verdicts unchanged") {
  const auto bidisc = unit_polydisc(2);
  const SampledCurve c = build_chain_curve(*bidisc, axis_chain(-0.3, 0.6), 100);
  const auto a = check_almost_geodesic(*bidisc, c, 1.0, 0.02, quick_check());
  const auto b = check_almost_geodesic(*bidisc, c.reparametrized(1.0, 7.25), 1.0, 0.02, quick_check());
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) CHECK(a.pairs[i].verdict == b.pairs[i].verdict);
  CHECK(a.condition_a == b.condition_a);
}

TEST_CASE("random bidisc extremal chains never fail") {
  const auto bidisc = unit_polydisc(2);
  for (std::uint64_t k = 0; k < 6; ++k) {
    CounterRng rng(11, k);
    const cplx rot = std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
    const double budget = 0.95 * rng.uniform();
    const cplx c2 = rng.disc_point(budget);
    const cplx d2 = std::polar(0.95 - std::abs(c2), rng.uniform(0.0, 6.283185307179586)) * rng.uniform();
    const DiscChain chain({ChainLink{AnalyticDisc(ComplexPoint{0.0, c2}, ComplexPoint{rot, d2}), DiscPoint(rng.disc_point(0.9)),
                                     DiscPoint(rng.disc_point(0.9))}});
    const SampledCurve c = build_chain_curve(*bidisc, chain, 64);
    const auto v = check_almost_geodesic(*bidisc, c, 1.0, 0.05, quick_check());
    CHECK(v.overall != Verdict::fail);
  }
}

TEST_CASE("visibility experiment on the ball") {
  const auto ball = unit_ball(2);
  VisibilityOptions o;
  o.n_curves = 6;
  o.check = quick_check();
  const auto rep = visibility_experiment(*ball, {1.0, 0.0}, {-1.0, 0.0}, o);
  CHECK(rep.tested == 6);
  CHECK(rep.passing >= 5);
  REQUIRE(rep.epsilon_star);
  CHECK(*rep.epsilon_star >= 0.5);
  for (const auto& c : rep.curves) {
    REQUIRE(c.start);
    CHECK(ball->certified_radius(*c.start) >= 1e-2);
    CHECK(distance(*c.start, ComplexPoint{1.0, 0.0}) <= 0.05);
  }
  CHECK_THROWS_AS(visibility_experiment(*ball, {1.0, 0.0}, {1.0, 0.0}, o), Error);
}

TEST_CASE("epsilon star is antitone in the neighborhood radius") {
  const auto ball = unit_ball(2);
  VisibilityOptions o;
  o.n_curves = 8;
  o.pool_radius = 0.2;
  o.check = quick_check();
  o.r_nbhd = 0.2;
  const auto wide = visibility_experiment(*ball, {1.0, 0.0}, {0.0, 1.0}, o);
  o.r_nbhd = 0.12;
  const auto narrow = visibility_experiment(*ball, {1.0, 0.0}, {0.0, 1.0}, o);
  CHECK(narrow.tested <= wide.tested);
  REQUIRE(wide.epsilon_star);
  if (narrow.epsilon_star) CHECK(*narrow.epsilon_star >= *wide.epsilon_star);
  for (std::size_t i = 0; i < wide.curves.size(); ++i) {
    if (narrow.curves[i].tested) {
      CHECK(wide.curves[i].tested);
      CHECK(wide.curves[i].verdict == narrow.curves[i].verdict);
    }
  }
}
