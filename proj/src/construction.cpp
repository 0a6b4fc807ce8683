#include "kobalab/construction.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "kobalab/error.hpp"

namespace kobalab {

namespace {

Rational inverse_power(unsigned base, std::size_t exponent) {
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t i = 0; i < exponent; ++i) den *= base;
  return Rational(1) / Rational(den);
}

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::string str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

void require_index(std::size_t nu) {
  if (nu == 0) throw Error("ladder index must be >= 1");
}

}  // namespace

double to_double(const Rational& q) { return q.convert_to<double>(); }

ComplexPoint RationalPoint2::to_point() const { return ComplexPoint{to_double(z1), to_double(z2)}; }

bool LadderSegment::contains(const RationalPoint2& p) const {
  return p.z2 == slope * p.z1 + intercept && abs_q(p.z1) <= radius;
}

double LadderSegment::line_residual(const ComplexPoint& z) const {
  if (z.dim() != 2) throw Error("LadderSegment: point must lie in C^2");
  return std::abs(z[1] - to_double(slope) * z[0] - to_double(intercept));
}

SibonyLadder::SibonyLadder(std::size_t depth, unsigned a_base, unsigned b_base)
    : depth_(depth), a_base_(a_base), b_base_(b_base) {
  if (depth == 0) throw Error("SibonyLadder: depth must be positive");
  if (a_base < 2 || b_base < 2) throw Error("SibonyLadder: bases must be >= 2");
}

Rational SibonyLadder::a(std::size_t nu) const {
  require_index(nu);
  return inverse_power(a_base_, nu + 1);
}

Rational SibonyLadder::b(std::size_t nu) const {
  require_index(nu);
  return inverse_power(b_base_, nu + 1);
}

LadderSegment SibonyLadder::segment(std::size_t nu) const {
  return {nu, slope(nu), intercept(nu), b(nu)};
}

RationalPoint2 SibonyLadder::point(std::size_t nu) const {
  const Rational an = a(nu);
  return {an, an * an};
}

RationalPoint2 SibonyLadder::phi_exact(std::size_t nu, const Rational& zeta) const {
  if (abs_q(zeta) >= 1) throw Error("phi: parameter must lie in the unit disc");
  const Rational bn = b(nu);
  return {bn * zeta, bn * (a(nu + 1) + a(nu)) * zeta - a(nu) * a(nu + 1)};
}

ComplexPoint SibonyLadder::phi(std::size_t nu, DiscPoint zeta) const { return disc(nu)(zeta.value()); }

AnalyticDisc SibonyLadder::disc(std::size_t nu) const {
  const double bn = to_double(b(nu));
  const double s = to_double(a(nu + 1) + a(nu));
  const double t = to_double(-a(nu) * a(nu + 1));
  return AnalyticDisc(ComplexPoint{0.0, t}, ComplexPoint{bn, bn * s});
}

DiscChain SibonyLadder::link(std::size_t nu) const {
  const double zin = to_double(a(nu) / b(nu));
  const double zout = to_double(a(nu + 1) / b(nu));
  return DiscChain({{disc(nu), DiscPoint(zin), DiscPoint(zout)}});
}

ComplexPoint ladder_point(std::size_t nu) { return SibonyLadder(std::max<std::size_t>(nu, 1)).point(nu).to_point(); }

ComplexPoint phi(std::size_t nu, DiscPoint zeta) { return SibonyLadder(std::max<std::size_t>(nu, 1)).phi(nu, zeta); }

bool LadderReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LadderCheck& c) { return c.passed; });
}

const LadderCheck& LadderReport::check(const std::string& item) const {
  for (const auto& c : checks)
    if (c.item == item) return c;
  throw Error("LadderReport: no check named " + item);
}

LadderReport verify_ladder(const SibonyLadder& ladder) {
  const std::size_t n = ladder.depth();
  if (n < 2) throw Error("verify_ladder: depth must be >= 2");
  LadderReport report;
  report.depth = n;

  LadderCheck a{"a", "x_nu lies on X_nu; |x_nu|^2 decreases at least geometrically (ratio 1/2) to 0", true, {}};
  LadderCheck b{"b", "phi_nu(D) lies on X_nu: line equation holds identically and |b_nu zeta| < b_nu", true, {}};
  LadderCheck c{"c", "a_nu/b_nu, a_{nu+1}/b_nu in D with dyadic values; phi_nu maps them to x_nu, x_{nu+1}", true, {}};
  auto fail = [](LadderCheck& chk, std::size_t nu, const std::string& what) {
    chk.passed = false;
    chk.witnesses.push_back("nu=" + std::to_string(nu) + ": " + what);
  };

  for (std::size_t nu = 1; nu <= n; ++nu) {
    const LadderSegment seg = ladder.segment(nu);
    const RationalPoint2 x = ladder.point(nu);
    const RationalPoint2 next = ladder.point(nu + 1);

    if (!seg.contains(x)) fail(a, nu, "x_nu = (" + str(x.z1) + ", " + str(x.z2) + ") not on X_nu");
    const Rational n0 = x.z1 * x.z1 + x.z2 * x.z2;
    const Rational n1 = next.z1 * next.z1 + next.z2 * next.z2;
    if (!(n1 > 0 && 2 * n1 <= n0)) fail(a, nu, "|x_{nu+1}|^2 = " + str(n1) + " vs |x_nu|^2 = " + str(n0));

    // phi_nu(zeta) = (B zeta, S zeta + T); on the line z2 = slope z1 + intercept
    // for every zeta iff S = slope*B and T = intercept.
    const Rational bn = ladder.b(nu);
    const Rational coeff1 = bn;
    const Rational coeff2 = bn * (ladder.a(nu + 1) + ladder.a(nu));
    const Rational constant2 = -ladder.a(nu) * ladder.a(nu + 1);
    if (coeff2 != seg.slope * coeff1) fail(b, nu, "z2 coefficient " + str(coeff2) + " != slope * " + str(coeff1));
    if (constant2 != seg.intercept) fail(b, nu, "constant term " + str(constant2) + " != intercept");
    if (abs_q(coeff1) > seg.radius) fail(b, nu, "|b_nu| exceeds the segment radius");

    const Rational zin = ladder.a(nu) / bn;
    const Rational zout = ladder.a(nu + 1) / bn;
    const Rational din = inverse_power(2, nu + 1);
    const Rational dout = inverse_power(2, nu + 3);
    if (abs_q(zin) >= 1 || abs_q(zout) >= 1) {
      fail(c, nu, "parameter outside the unit disc");
      continue;
    }
    if (zin != din) fail(c, nu, "a_nu/b_nu = " + str(zin) + " != " + str(din));
    if (zout != dout) fail(c, nu, "a_{nu+1}/b_nu = " + str(zout) + " != " + str(dout));
    if (ladder.phi_exact(nu, zin) != x) fail(c, nu, "phi_nu(a_nu/b_nu) != x_nu");
    if (ladder.phi_exact(nu, zout) != next) fail(c, nu, "phi_nu(a_{nu+1}/b_nu) != x_{nu+1}");
  }
  report.checks = {a, b, c};
  return report;
}

LadderReport verify_ladder(std::size_t depth) { return verify_ladder(SibonyLadder(depth)); }

ChainTermTable chain_table(const SibonyLadder& ladder, double ratio_floor) {
  if (!(ratio_floor > 0.0 && ratio_floor < 1.0)) throw Error("chain_table: ratio floor must lie in (0, 1)");
  const std::size_t n = ladder.depth();
  ChainTermTable table;
  table.rows.reserve(n);
  double sum = 0.0;
  for (std::size_t nu = 1; nu <= n; ++nu) {
    const double zin = to_double(ladder.a(nu) / ladder.b(nu));
    const double zout = to_double(ladder.a(nu + 1) / ladder.b(nu));
    const double term = poincare_distance(zin, zout);
    sum += term;
    table.rows.push_back({nu, to_double(ladder.a(nu)), to_double(ladder.b(nu)), term, sum, 0.0});
  }
  double observed = 0.0;
  for (std::size_t i = 1; i < n; ++i) observed = std::max(observed, table.rows[i].term / table.rows[i - 1].term);
  table.observed_ratio = observed;
  table.window_begin = 1;
  table.window_end = n;
  table.ratio = std::max(observed, ratio_floor);
  if (table.ratio >= 1.0) throw Error("chain_table: observed term ratio >= 1, no geometric tail certificate");

  // tail(nu) = sum_{j=nu}^{N} term(j) + term(N) r/(1-r)
  const double geometric = table.rows.back().term * table.ratio / (1.0 - table.ratio);
  double suffix = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    suffix += table.rows[i].term;
    table.rows[i].tail_bound = suffix + geometric;
  }
  return table;
}

ChainTermTable chain_table(std::size_t depth, double ratio_floor) {
  return chain_table(SibonyLadder(depth), ratio_floor);
}

std::string ChainTermTable::csv() const {
  std::string out = "nu,a_nu,b_nu,term,partial_sum,tail_bound\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.nu, r.a, r.b, r.term, r.partial_sum,
                  r.tail_bound);
    out += buf;
  }
  return out;
}

}  // namespace kobalab
