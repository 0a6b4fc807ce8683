#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "kobalab/domains.hpp"
#include "kobalab/error.hpp"
#include "kobalab/random.hpp"

using namespace kobalab;

namespace {

DomainPtr ball_sublevel(std::optional<double> lipschitz) {
  SublevelOptions o;
  o.lipschitz = lipschitz;
  return std::make_shared<SublevelDomain>(norm2_field(2), 1.0, unit_ball(2), ComplexPoint(2), o);
}

}  // namespace

TEST_CASE("membership on model domains") {
  const auto bidisc = unit_polydisc(2);
  CHECK(bidisc->contains({0.5, 0.5}));
  CHECK_FALSE(bidisc->contains({1.0, 0.0}));
  CHECK_THROWS_AS(bidisc->contains({0.5}), Error);
  CHECK(ball_sublevel(2.0)->contains({0.5, 0.0}));
  CHECK_FALSE(unit_ball(2)->contains({0.8, 0.7}));
}

TEST_CASE("boundary distances") {
  CHECK(unit_ball(2)->boundary_distance(ComplexPoint(2)) == 1.0);
  CHECK(unit_polydisc(2)->boundary_distance({0.5, 0.0}) == doctest::Approx(0.5));
  const double d = ball_sublevel(2.0)->boundary_distance({0.5, 0.0});
  CHECK(d >= 0.375 - 1e-15);
  CHECK(d <= 0.5);
  CHECK_THROWS_AS(unit_ball(2)->boundary_distance({1.0, 0.0}), Error);
}

TEST_CASE("enclosing balls") {
  const auto b = unit_ball(3)->enclosing_ball();
  CHECK(b.radius == 1.0);
  CHECK(b.center == ComplexPoint(3));
  auto g = std::make_shared<SublevelDomain>(norm2_field(2), 1.0, std::make_shared<BallDomain>(ComplexPoint(2), 3.0),
                                            ComplexPoint(2));
  CHECK(g->enclosing_ball().radius == 3.0);
}

TEST_CASE("slice embedding") {
  CHECK(slice_embed({1.0 / 16, 1.0 / 256}, 4) == ComplexPoint{1.0 / 16, 1.0 / 256, 0.0, 0.0});
  CHECK(slice_embed({0.5}, 2) == ComplexPoint{0.5, 0.0});
  const ComplexPoint z{cplx(0.1, 0.2), 0.3};
  CHECK(slice_embed(z, 2) == z);
  CHECK_THROWS_AS(slice_embed(z, 1), Error);
  CHECK_THROWS_AS(ProductSlice(2, 2), Error);
  const ProductSlice s(2, 5);
  CHECK(s.project(s.embed(z)) == z);
}

TEST_CASE("certified balls lie in the domain") {
  std::vector<DomainPtr> domains = {unit_ball(2), unit_polydisc(2), ball_sublevel(std::nullopt),
                                    std::make_shared<ProductDomain>(std::vector<DomainPtr>{unit_ball(1), unit_ball(2)})};
  for (std::size_t k = 0; k < domains.size(); ++k) {
    const auto& d = domains[k];
    CounterRng rng(3, k);
    const auto enc = d->enclosing_ball();
    int tested = 0;
    for (int i = 0; i < 2000; ++i) {
      const ComplexPoint z = enc.center + rng.ball_point(d->dimension(), enc.radius);
      if (!d->contains(z)) continue;
      CHECK(distance(z, enc.center) < enc.radius);
      const double delta = d->boundary_distance(z);
      REQUIRE(delta > 0.0);
      const ComplexPoint w = z + rng.ball_point(d->dimension(), delta * 0.999999);
      CHECK(d->contains(w));
      ++tested;
    }
    CHECK(tested > 100);
  }
}

TEST_CASE("sublevel component membership") {
  // {|z1|^2 (|z1|^2 - 1)^2 ... } replaced by two separated balls: f = min of two distances.
  ScalarField two_wells(
      1,
      [](const ComplexPoint& z) {
        return std::min(std::norm(z[0] - cplx(-1.0)), std::norm(z[0] - cplx(1.0)));
      },
      {}, {}, "two-wells");
  SublevelOptions o;
  o.lipschitz = 8.0;
  SublevelDomain d(two_wells, 0.25, std::make_shared<BallDomain>(ComplexPoint(1), 3.0), ComplexPoint{-1.0}, o);
  CHECK(d.contains({-1.2}));
  CHECK(d.membership({1.0}) != Membership::inside);
  CHECK(d.certified_radius({1.0}) > 0.0);
  CHECK(d.membership({0.0}) == Membership::outside);
}

TEST_CASE("closed-form disc tests") {
  const auto bidisc = unit_polydisc(2);
  auto t = bidisc->test_affine_disc(ComplexPoint(2), {0.5, 0.0}, 0.99);
  REQUIRE(t);
  CHECK(t->inside);
  t = bidisc->test_affine_disc(ComplexPoint(2), {1.2, 0.0}, 0.99);
  REQUIRE(t);
  CHECK_FALSE(t->inside);
  CHECK(std::abs(t->witness) == doctest::Approx(1 / 1.2).epsilon(1e-6));
  t = unit_ball(2)->test_affine_disc({0.0, 0.5}, {0.9, 0.0}, 0.99);
  REQUIRE(t);
  CHECK_FALSE(t->inside);
  CHECK(std::norm(0.9 * t->witness) + 0.25 >= 1.0);
}
