#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kobalab/error.hpp"
#include "kobalab/psh.hpp"
#include "kobalab/random.hpp"

using namespace kobalab;

namespace {

ScalarField plain(std::size_t n, ScalarField::Evaluator f) { return ScalarField(n, std::move(f)); }

// |z1|^4 + |z1|^2 |z2|^2 + exp(Re z1)
ScalarField test_field() {
  return ScalarField(
      2,
      [](const ComplexPoint& z) {
        const double a = std::norm(z[0]), b = std::norm(z[1]);
        return a * a + a * b + std::exp(z[0].real());
      },
      {},
      [](const ComplexPoint& z) {
        LeviMatrix l(2, 2);
        const double a = std::norm(z[0]), b = std::norm(z[1]);
        l(0, 0) = 4 * a + b + 0.25 * std::exp(z[0].real());
        l(0, 1) = z[0] * std::conj(z[1]);
        l(1, 0) = std::conj(z[0]) * z[1];
        l(1, 1) = a;
        return l;
      },
      "test");
}

}  // namespace

TEST_CASE("levi eigenvalues of simple fields") {
  const auto n2 = norm2_field(2);
  CHECK(levi_min_eigenvalue(n2, {0.3, cplx(0.1, 0.4)}, 1e-4).min_eigenvalue == doctest::Approx(1.0));
  CHECK(levi_min_eigenvalue(n2, {0.3, 0.2}, 1e-3, true).min_eigenvalue == doctest::Approx(1.0).epsilon(1e-7));
  const auto diff = plain(2, [](const ComplexPoint& z) { return std::norm(z[0]) - std::norm(z[1]); });
  CHECK(levi_min_eigenvalue(diff, {0.2, 0.1}, 1e-3).min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-7));
  const auto harm = plain(2, [](const ComplexPoint& z) { return (z[0] * z[0]).real(); });
  CHECK(std::abs(levi_min_eigenvalue(harm, {0.2, 0.1}, 1e-3).min_eigenvalue) < 1e-7);
  const auto rep = levi_min_eigenvalue(harm, {0.2, 0.1}, 1e-3);
  CHECK(rep.mode == LeviMode::finite_difference);
  CHECK(rep.step == 1e-3);
  CHECK_THROWS_AS(levi_min_eigenvalue(n2, {0.0, 0.0}, 0.0), Error);
  const auto bad = plain(1, [](const ComplexPoint& z) { return std::log(z[0].real()); });
  CHECK_THROWS_AS(levi_min_eigenvalue(bad, {0.0}, 1e-3), Error);
}

TEST_CASE("finite differences match the analytic Levi matrix at second order") {
  const auto f = test_field();
  CounterRng rng(5, 0);
  for (int i = 0; i < 10; ++i) {
    const ComplexPoint z = rng.ball_point(2, 1.0);
    const double exact = levi_min_eigenvalue(f, z, 1e-3).min_eigenvalue;
    double h = 4e-2;
    double prev = std::abs(levi_min_eigenvalue(f, z, h, true).min_eigenvalue - exact);
    for (int k = 0; k < 2; ++k) {
      h /= 2;
      const double err = std::abs(levi_min_eigenvalue(f, z, h, true).min_eigenvalue - exact);
      CHECK(prev / err >= 3.0);
      prev = err;
    }
    const LeviMatrix fd = levi_matrix_fd(f, z, 1e-3);
    CHECK((fd - f.levi(z)).norm() < 1e-5);
  }
}

TEST_CASE("gradient norms") {
  const auto n2 = norm2_field(2);
  CHECK(gradient_nonvanishing(n2, {0.5, 0.0}, 1e-4) == doctest::Approx(1.0));
  CHECK(gradient_nonvanishing(n2, {0.0, 0.0}, 1e-4) == 0.0);
  const auto re = plain(2, [](const ComplexPoint& z) { return z[0].real(); });
  CHECK(gradient_nonvanishing(re, {0.3, 0.7}, 1e-4) == doctest::Approx(1.0).epsilon(1e-9));
  const auto g = gradient_fd(n2, {cplx(0.2, -0.1), 0.4}, 1e-4);
  CHECK(std::abs(g[0] - cplx(0.4, -0.2)) < 1e-9);
}

TEST_CASE("strong pseudoconvexity") {
  const auto n2 = norm2_field(2);
  CHECK(strong_pseudoconvexity_check(n2, {1.0, 0.0}, 1e-4) == doctest::Approx(1.0));
  const auto degenerate = plain(2, [](const ComplexPoint& z) { return std::norm(z[0]); });
  CHECK(std::abs(strong_pseudoconvexity_check(degenerate, {1.0, 0.0}, 1e-4)) < 1e-6);
  CHECK_THROWS_AS(strong_pseudoconvexity_check(n2, {0.0, 0.0}, 1e-4), Error);
  CHECK_THROWS_AS(strong_pseudoconvexity_check(norm2_field(1), {1.0}, 1e-4), Error);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2), s = Eigen::MatrixXcd::Zero(2, 2);
  s(0, 0) = 1.0;
  const auto q = quadratic_field(a, s);  // |z|^2 + Re(z1^2)
  const auto qfd = plain(2, [q](const ComplexPoint& z) { return q(z); });
  CounterRng rng(9, 0);
  for (int i = 0; i < 20; ++i) {
    ComplexPoint p = rng.sphere_point(2);
    const double fp = q(p);
    p = (1.0 / std::sqrt(fp)) * p;  // f is 2-homogeneous
    CHECK(q(p) == doctest::Approx(1.0));
    CHECK(strong_pseudoconvexity_check(qfd, p, 1e-4) >= 1.0 - 1e-5);
  }

  // scaling by c scales the margin; adding a pluriharmonic term does not change it
  const ComplexPoint p{0.6, cplx(0.0, 0.8)};
  const auto scaled3 = plain(2, [](const ComplexPoint& z) { return 3.0 * (std::norm(z[0]) + 2 * std::norm(z[1])); });
  const auto base = plain(2, [](const ComplexPoint& z) { return std::norm(z[0]) + 2 * std::norm(z[1]); });
  const auto shifted = plain(2, [](const ComplexPoint& z) {
    return std::norm(z[0]) + 2 * std::norm(z[1]) + (z[0] * z[1]).real() + z[1].imag();
  });
  const double b = strong_pseudoconvexity_check(base, p, 1e-4);
  CHECK(strong_pseudoconvexity_check(scaled3, p, 1e-4) == doctest::Approx(3 * b).epsilon(1e-6));
  CHECK(b > 0.0);
  const double sh = strong_pseudoconvexity_check(shifted, p, 1e-4);
  CHECK(sh > 0.0);
}

TEST_CASE("unit sphere margin at boundary samples") {
  const auto n2 = plain(2, [](const ComplexPoint& z) { return z.norm2(); });
  CounterRng rng(1, 0);
  for (int i = 0; i < 50; ++i) {
    const ComplexPoint p = rng.sphere_point(2);
    CHECK(std::abs(strong_pseudoconvexity_check(n2, p, 1e-4) - 1.0) <= 1e-3);
  }
}

TEST_CASE("lift") {
  const auto zero = plain(2, [](const ComplexPoint&) { return 0.0; });
  CHECK(lift_h(zero, 3)({0.0, 0.0, 0.5}) == doctest::Approx(0.25));
  const auto n2 = norm2_field(2);
  const auto h4 = lift_h(n2, 4);
  CHECK(h4({0.1, 0.0, 0.2, 0.2}) == doctest::Approx(0.09));
  CHECK(h4({0.3, 0.4, 0.0, 0.0}) == n2({0.3, 0.4}));
  CHECK_THROWS_AS(lift_h(n2, 2), Error);
  const auto t = test_field();
  for (std::size_t n : {3u, 5u}) {
    const auto h = lift_h(t, n);
    const ComplexPoint z = slice_embed({0.3, cplx(0.2, 0.1)}, n).with(n - 1, 0.4);
    const LeviMatrix l = h.levi(z);
    CHECK(l.bottomRightCorner(n - 2, n - 2) == LeviMatrix::Identity(n - 2, n - 2));
    CHECK(l.topRightCorner(2, n - 2).norm() == 0.0);
  }
}

TEST_CASE("candidate verification") {
  const SibonyLadder ladder(30);
  GridSpec spec;
  spec.shells = 8;
  spec.directions = 16;
  const auto rep = verify_u_candidate(norm2_field(2), ladder, spec);
  CHECK_FALSE(rep.accepted());
  CHECK_FALSE(rep.check("value_at_origin").passed);
  for (const auto& c : rep.checks) CHECK(c.samples > 0);
  CHECK(rep.check("max_on_X").samples >= 20);

  const auto one = plain(2, [](const ComplexPoint& z) { return 1.0 + z.norm2(); });
  const auto r1 = verify_u_candidate(one, ladder, spec);
  CHECK(r1.check("value_at_origin").passed);
  CHECK(r1.check("value_at_origin").value == 1.0);

  const auto exp = sibony_experimental_candidate(ladder);
  CHECK(exp(ComplexPoint(2)) == 1.0);
  const auto re = verify_u_candidate(exp, ladder, spec);
  CHECK(re.check("value_at_origin").passed);
  CHECK_FALSE(re.accepted());

  // analytic suppliers of the experimental candidate agree with finite differences
  const ComplexPoint z{cplx(0.3, 0.1), cplx(-0.2, 0.25)};
  CHECK((levi_matrix_fd(exp, z, 1e-4) - exp.levi(z)).norm() < 1e-5);
  const auto g = gradient_fd(exp, z, 1e-5);
  const auto ga = exp.gradient(z);
  CHECK(std::abs(g[0] - ga[0]) + std::abs(g[1] - ga[1]) < 1e-6);
}
