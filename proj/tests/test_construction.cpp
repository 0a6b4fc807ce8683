#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kobalab/construction.hpp"
#include "kobalab/error.hpp"

using namespace kobalab;

TEST_CASE("ladder points") {
  CHECK(ladder_point(1) == ComplexPoint{0.0625, 0.00390625});
  CHECK(ladder_point(2) == ComplexPoint{1.0 / 64, 1.0 / 4096});
  CHECK_THROWS_AS(SibonyLadder(3).point(0), Error);
  const SibonyLadder l(40);
  for (std::size_t nu = 1; nu <= 40; ++nu) {
    CHECK(l.segment(nu).contains(l.point(nu)));
    CHECK(l.a(nu) == l.b(nu) * l.b(nu));
    CHECK(l.a(nu + 1) < l.a(nu));
    CHECK(l.a(nu) < l.b(nu));
  }
}

TEST_CASE("phi evaluations") {
  CHECK(phi(1, 0.25) == ComplexPoint{1.0 / 16, 1.0 / 256});
  CHECK(phi(1, 1.0 / 16) == ComplexPoint{1.0 / 64, 1.0 / 4096});
  CHECK(phi(1, 0.0) == ComplexPoint{0.0, -1.0 / 1024});
  const SibonyLadder l(10);
  CHECK(l.phi_exact(1, Rational(1, 4)) == l.point(1));
  CHECK(l.phi_exact(1, Rational(1, 16)) == l.point(2));
  CHECK_THROWS_AS(l.phi_exact(1, Rational(1)), Error);
  for (std::size_t nu = 1; nu <= 10; ++nu) {
    for (double r : {0.0, 0.3, 0.9}) {
      for (int k = 0; k < 8; ++k) {
        const ComplexPoint p = l.phi(nu, DiscPoint(std::polar(r, k * 0.785398)));
        CHECK(l.segment(nu).line_residual(p) <= 1e-18);
        CHECK(std::abs(p[0]) < to_double(l.b(nu)));
      }
    }
  }
}

TEST_CASE("verify_ladder passes exactly") {
  for (std::size_t n : {2u, 20u, 40u}) {
    const auto rep = verify_ladder(n);
    CHECK(rep.all_passed());
    CHECK(rep.checks.size() == 3);
  }
  CHECK_THROWS_AS(verify_ladder(1), Error);
}

TEST_CASE("dyadic disc parameters") {
  const SibonyLadder l(40);
  for (std::size_t nu = 1; nu <= 40; ++nu) {
    CHECK(l.a(nu) / l.b(nu) == Rational(1, boost::multiprecision::cpp_int(1) << (nu + 1)));
    CHECK(l.a(nu + 1) / l.b(nu) == Rational(1, boost::multiprecision::cpp_int(1) << (nu + 3)));
  }
}

TEST_CASE("mutated ladder is flagged in (c) only") {
  const auto rep = verify_ladder(SibonyLadder(20, 3, 2));
  CHECK(rep.check("a").passed);
  CHECK(rep.check("b").passed);
  CHECK_FALSE(rep.check("c").passed);
  CHECK_FALSE(rep.check("c").witnesses.empty());
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("chain term table") {
  const auto t = chain_table(40);
  REQUIRE(t.rows.size() == 40);
  CHECK(t.rows[0].term == doctest::Approx(0.192831240406).epsilon(1e-10));
  CHECK(t.rows[1].term == doctest::Approx(0.094397035650).epsilon(1e-10));
  CHECK(t.rows[1].partial_sum == doctest::Approx(0.287228276056).epsilon(1e-10));
  CHECK(t.rows[0].term == doctest::Approx(std::atanh(4.0 / 21.0)).epsilon(1e-14));
  for (std::size_t i = 1; i < 30; ++i) {
    const double ratio = t.rows[i].term / t.rows[i - 1].term;
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.51);
  }
  for (std::size_t i = 9; i + 1 < 40; ++i) CHECK(std::abs(t.rows[i + 1].term / t.rows[i].term - 0.5) < 0.02);
  for (std::size_t i = 1; i < 40; ++i) {
    CHECK(t.rows[i].term > 0.0);
    CHECK(t.rows[i].term < t.rows[i - 1].term);
    CHECK(t.rows[i].partial_sum > t.rows[i - 1].partial_sum);
    CHECK(t.rows[i].tail_bound < t.rows[i - 1].tail_bound);
  }
  CHECK(t.ratio == 0.51);
  CHECK(t.rows[9].tail_bound < 1e-3);
  CHECK(t.rows[9].tail_bound == doctest::Approx(7.3242e-4).epsilon(1e-3));
  const std::string csv = t.csv();
  CHECK(csv.rfind("nu,a_nu,b_nu,term,partial_sum,tail_bound\n", 0) == 0);
}
