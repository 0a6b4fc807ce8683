#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "kobalab/error.hpp"
#include "kobalab/kobayashi.hpp"
#include "kobalab/random.hpp"
#include "oracles.hpp"

using namespace kobalab;

namespace {

oracle::vec coords(const ComplexPoint& z) { return {z.coords().begin(), z.coords().end()}; }

DomainPtr sublevel_ball(std::size_t n) {
  SublevelOptions o;
  o.lipschitz = 2.0;
  return std::make_shared<SublevelDomain>(norm2_field(n), 1.0, unit_ball(n), ComplexPoint(n), o);
}

}  // namespace

TEST_CASE("disc certification") {
  const auto bidisc = unit_polydisc(2);
  CHECK(disc_in_domain(AnalyticDisc(ComplexPoint(2), {0.5, 0.0}), *bidisc, 0.01).status == DiscStatus::certified);
  const auto r = disc_in_domain(AnalyticDisc(ComplexPoint(2), {1.2, 0.0}), *bidisc, 0.01);
  CHECK(r.status == DiscStatus::rejected);
  CHECK(std::abs(r.witness) == doctest::Approx(0.8333).epsilon(1e-3));
  CHECK(disc_in_domain(AnalyticDisc({0.0, 0.5}, {0.9, 0.0}), *unit_ball(2), 0.001).status == DiscStatus::rejected);
  CHECK_THROWS_AS(AnalyticDisc(ComplexPoint(2), ComplexPoint(2)), Error);
}

TEST_CASE("covering certification agrees with closed forms") {
  const auto ball = sublevel_ball(2);
  const auto inside = disc_in_domain(AnalyticDisc({0.1, 0.0}, {0.5, 0.3}), *ball, 1e-3);
  CHECK(inside.status == DiscStatus::certified);
  CHECK(inside.evaluations > 1);
  const auto out = disc_in_domain(AnalyticDisc({0.0, 0.5}, {0.9, 0.0}), *ball, 1e-3);
  REQUIRE(out.status == DiscStatus::rejected);
  CHECK(std::norm(0.9 * out.witness) + 0.25 >= 1.0);
  CHECK(std::abs(out.witness) <= 1 - 1e-3 + 1e-15);
  const auto starved = disc_in_domain(AnalyticDisc({0.1, 0.0}, {0.8, 0.0}), *ball, 1e-3, 3);
  CHECK(starved.status == DiscStatus::indeterminate);
}

TEST_CASE("chain bounds") {
  const SibonyLadder l(5);
  const auto bidisc = unit_polydisc(2);
  const double u1 = chain_upper_bound(*bidisc, l.link(1), 1e-9);
  CHECK(u1 == doctest::Approx(0.192831240406).epsilon(1e-7));
  CHECK(chain_upper_bound(*bidisc, l.link(1)) >= 0.192831240406);
  const DiscChain two = l.link(1).concatenated(l.link(2));
  CHECK(chain_upper_bound(*bidisc, two, 1e-9) == doctest::Approx(0.287228276056).epsilon(1e-7));
  const DiscChain still({{AnalyticDisc({0.1, 0.1}, {0.2, 0.0}), DiscPoint(0.3), DiscPoint(0.3)}});
  CHECK(chain_upper_bound(*bidisc, still) == 0.0);
  const DiscChain bad({{AnalyticDisc(ComplexPoint(2), {1.5, 0.0}), DiscPoint(0.0), DiscPoint(0.1)}});
  CHECK_THROWS_AS(chain_upper_bound(*bidisc, bad), Error);
  CHECK_THROWS_AS(l.link(1).concatenated(l.link(3)), Error);
}

TEST_CASE("search on model domains") {
  const auto u = search_upper_bound(*unit_ball(1), {0.0}, {0.5});
  REQUIRE(u.value);
  CHECK(*u.value <= 0.549306144334 + 1e-3);
  CHECK(*u.value >= 0.549306144334);
  const auto b = search_upper_bound(*unit_ball(2), {0.0, 0.0}, {0.5, 0.0});
  REQUIRE(b.value);
  CHECK(*b.value <= 0.549306144334 + 5e-3);
  const auto p = search_upper_bound(*unit_polydisc(2), {0.0, 0.0}, {0.5, 0.25});
  REQUIRE(p.value);
  CHECK(*p.value <= 0.549306144334 + 5e-3);
  CHECK(p.budget_used <= 10000);
  const auto none = search_upper_bound(*unit_ball(2), {0.0, 0.0}, {0.5, 0.0}, SearchOptions{.budget = 0});
  CHECK_FALSE(none.value);
  CHECK_FALSE(none.reason.empty());
}

TEST_CASE("lower bounds") {
  CHECK(lower_bound(*unit_ball(2), {0.0, 0.0}, {0.5, 0.0}).value == doctest::Approx(0.549306144334).epsilon(1e-11));
  const auto pl = lower_bound(*unit_polydisc(2), {0.0, 0.0}, {0.5, 0.0});
  CHECK(pl.value == doctest::Approx(0.549306144334).epsilon(1e-11));
  CHECK(pl.certificate.find("projection") != std::string::npos);
  CHECK(lower_bound(*unit_polydisc(2), {0.3, 0.1}, {0.3, 0.1}).value == 0.0);
}

TEST_CASE("estimates bracket closed forms") {
  const auto e = estimate_distance(*unit_polydisc(2), {0.0, 0.0}, {0.5, 0.0});
  REQUIRE(e.upper);
  CHECK(e.lower <= 0.549306144334);
  CHECK(e.lower >= 0.549306144334 - 1e-9);
  CHECK(*e.upper <= 0.549306144334 + 5e-3);
  const auto z = estimate_distance(*unit_ball(2), {0.2, 0.1}, {0.2, 0.1});
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);
  const auto far = estimate_distance(*unit_ball(2), {0.0, 0.0}, {0.9, 0.0});
  CHECK(far.contains(1.472219489583));
}

TEST_CASE("sandwich on random pairs") {
  struct Case {
    DomainPtr d;
    int kind;
  };
  const std::vector<Case> cases = {{unit_ball(1), 0}, {unit_ball(2), 1}, {unit_polydisc(2), 2}};
  for (const auto& c : cases) {
    CounterRng rng(21, c.kind);
    for (int i = 0; i < 15; ++i) {
      const std::size_t n = c.d->dimension();
      ComplexPoint z = rng.ball_point(n, 0.9), w = rng.ball_point(n, 0.9);
      if (c.kind == 2) {
        z = ComplexPoint{rng.disc_point(0.9), rng.disc_point(0.9)};
        w = ComplexPoint{rng.disc_point(0.9), rng.disc_point(0.9)};
      }
      const double exact = c.kind == 0 ? oracle::disc(z[0], w[0])
                           : c.kind == 1 ? oracle::ball(coords(z), coords(w))
                                         : oracle::polydisc(coords(z), coords(w));
      const auto e = estimate_distance(*c.d, z, w, SearchOptions{.budget = 4000, .seed = 1});
      INFO(c.kind, " ", to_string(z), " ", to_string(w), " ", e.upper_reason);
      REQUIRE(e.upper);
      CHECK(e.lower <= exact);
      CHECK(exact <= *e.upper);
      if (c.kind < 2) CHECK(*e.width() <= 0.01 * exact + 1e-9);
    }
  }
}

TEST_CASE("monotonicity and triangle inequality of seeded searches") {
  const auto small = std::make_shared<BallDomain>(ComplexPoint(2), 0.6);
  const auto big = unit_ball(2);
  const ComplexPoint z{0.1, 0.0}, y{0.0, cplx(0.0, 0.2)}, w{-0.2, 0.1};
  const auto us = search_upper_bound(*small, z, w);
  REQUIRE(us.chain);
  SearchOptions seeded;
  seeded.seeds = {*us.chain};
  const auto ub = search_upper_bound(*big, z, w, seeded);
  const auto us2 = search_upper_bound(*small, z, w, seeded);
  CHECK(*ub.value <= *us2.value);

  const auto zy = search_upper_bound(*big, z, y);
  const auto yw = search_upper_bound(*big, y, w);
  SearchOptions joined;
  joined.seeds = {zy.chain->concatenated(*yw.chain)};
  const auto zw = search_upper_bound(*big, z, w, joined);
  CHECK(*zw.value <= *zy.value + *yw.value + 1e-12);
}

TEST_CASE("infinitesimal bounds") {
  const auto d = infinitesimal_bounds(*unit_ball(1), {0.0}, {1.0});
  CHECK(std::abs(d.upper - 1.0) <= 1e-6);
  CHECK(std::abs(d.lower - 1.0) <= 1e-6);
  const auto b = infinitesimal_bounds(*unit_ball(2), {0.0, 0.0}, {1.0, 0.0});
  CHECK(std::abs(b.upper - 1.0) <= 1e-6);
  CHECK(std::abs(b.lower - 1.0) <= 1e-6);
  const auto b3 = infinitesimal_bounds(*unit_ball(2), {0.0, 0.0}, {3.0, 0.0});
  CHECK(b3.upper == doctest::Approx(3 * b.upper).epsilon(1e-12));
  CHECK(b3.lower == doctest::Approx(3 * b.lower).epsilon(1e-12));
  CHECK_THROWS_AS(infinitesimal_bounds(*unit_ball(2), {0.0, 0.0}, {0.0, 0.0}), Error);

  // off-center points of the disc: k = |v| / (1 - |z|^2)
  const auto off = infinitesimal_bounds(*unit_ball(1), {0.6}, {1.0});
  CHECK(off.lower <= 1.0 / 0.64);
  CHECK(off.upper >= 1.0 / 0.64);
  CHECK(off.upper <= 1.0 / 0.64 * (1 + 1e-5));
  const auto poly = infinitesimal_bounds(*unit_polydisc(2), {0.3, cplx(0.0, 0.5)}, {0.2, 1.0});
  const double exact = std::max(0.2 / (1 - 0.09), 1.0 / (1 - 0.25));
  CHECK(poly.lower <= exact);
  CHECK(poly.upper >= exact);
  CHECK(poly.upper <= exact * (1 + 1e-5));
}

TEST_CASE("slice identity") {
  const auto r = slice_identity_check(*unit_ball(1), *unit_polydisc(2), {0.0}, {0.5});
  CHECK(r.passed);
  CHECK(r.g.contains(0.549306144334));
  CHECK(r.omega.contains(0.549306144334));
  const auto thin = std::make_shared<PolydiscDomain>(ComplexPoint(2), std::vector<double>{1.0, 0.5});
  const auto r2 = slice_identity_check(*unit_ball(1), *thin, {0.0}, {0.25});
  CHECK(r2.passed);
  CHECK(r2.omega.contains(0.255412811883));
  const auto r3 = slice_identity_check(*unit_ball(1), *unit_polydisc(2), {0.3}, {0.3});
  CHECK(r3.passed);
  CHECK(r3.omega.upper == 0.0);
  // Omega too small to contain G x {0}
  const auto tiny = std::make_shared<PolydiscDomain>(ComplexPoint(2), std::vector<double>{0.5, 1.0});
  CHECK_THROWS_AS(slice_identity_check(*unit_ball(1), *tiny, {0.0}, {0.25}), Error);
}

TEST_CASE("cauchy table on the bidisc") {
  const SibonyLadder ladder(40);
  const auto t = cauchy_table(*unit_polydisc(2), ladder, 1e-3);
  REQUIRE(t.rows.size() == 39);
  const auto terms = chain_table(ladder);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(t.rows[i].upper <= terms.rows[i].term * (1 + 2e-3));
    CHECK(t.rows[i].upper >= terms.rows[i].term);
  }
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].upper < t.rows[i - 1].upper);
    CHECK(t.rows[i].tail < t.rows[i - 1].tail);
    CHECK(t.rows[i].norm < t.rows[i - 1].norm);
  }
  CHECK(t.rows[0].norm == doctest::Approx(0.062621951335).epsilon(1e-10));
  CHECK(t.rows[9].tail < 1e-3);
  // lifted into C^3 through a sublevel oracle of the unit ball
  const auto t3 = cauchy_table(*sublevel_ball(3), SibonyLadder(12), 1e-3);
  CHECK(t3.rows[0].upper <= terms.rows[0].term * (1 + 2e-3));
  const auto small = std::make_shared<BallDomain>(ComplexPoint(2), 0.01);
  CHECK_THROWS_WITH_AS(cauchy_table(*small, SibonyLadder(5)), doctest::Contains("nu=1"), Error);
}
