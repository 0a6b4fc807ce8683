#include "kobalab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "kobalab/error.hpp"
#include "kobalab/random.hpp"

namespace kobalab {

namespace {

// Relative slack applied to closed-form "strictly inside" comparisons so that
// rounding can never turn an exit into a certificate.
constexpr double kStrictSlack = 1e-12;

// A parameter just past the exit radius t along `phase`, clamped to rho.
cplx exit_witness(double t, cplx phase, double rho) {
  return std::min(t * (1.0 + 1e-9), rho) * phase;
}

cplx unit_phase(cplx z, cplx fallback = 1.0) {
  const double r = std::abs(z);
  return r == 0.0 ? fallback : z / r;
}

}  // namespace

const char* to_string(Membership m) noexcept {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::outside: return "outside";
    case Membership::indeterminate: return "indeterminate";
  }
  return "?";
}

cplx DiscProjection::apply(const ComplexPoint& z) const {
  require_same_dim(coefficients, z, "DiscProjection");
  cplx s = offset;
  for (std::size_t j = 0; j < z.dim(); ++j) s += coefficients[j] * z[j];
  return s;
}

cplx DiscProjection::apply_linear(const ComplexPoint& v) const {
  require_same_dim(coefficients, v, "DiscProjection");
  cplx s = 0.0;
  for (std::size_t j = 0; j < v.dim(); ++j) s += coefficients[j] * v[j];
  return s;
}

Membership DomainOracle::membership(const ComplexPoint& z) const {
  if (z.dim() != dimension()) {
    throw Error(kind() + " domain: dimension mismatch (domain " + std::to_string(dimension()) +
                ", point " + std::to_string(z.dim()) + ")");
  }
  return do_membership(z);
}

double DomainOracle::boundary_distance(const ComplexPoint& z) const {
  if (!contains(z)) throw Error("boundary_distance: point " + to_string(z) + " is not in the domain");
  return certified_radius(z);
}

// ---------------------------------------------------------------- ball

BallDomain::BallDomain(ComplexPoint center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("BallDomain: radius must be positive");
}

Membership BallDomain::do_membership(const ComplexPoint& z) const {
  return distance(z, center_) < radius_ ? Membership::inside : Membership::outside;
}

double BallDomain::certified_radius(const ComplexPoint& z) const {
  require_same_dim(z, center_, "BallDomain");
  return std::max(0.0, radius_ - distance(z, center_));
}

std::optional<AffineDiscTest> BallDomain::test_affine_disc(const ComplexPoint& c, const ComplexPoint& d,
                                                           double rho) const {
  const ComplexPoint off = c - center_;
  const cplx g = inner(d, off);
  const double c2 = off.norm2();
  const double d2 = d.norm2();
  const double r2 = radius_ * radius_;
  const double max2 = c2 + rho * rho * d2 + 2.0 * rho * std::abs(g);
  if (max2 < r2 * (1.0 - kStrictSlack)) return AffineDiscTest{true, 0.0};
  const cplx phase = unit_phase(std::conj(g));
  if (c2 >= r2 || d2 == 0.0) return AffineDiscTest{false, 0.0};
  const double ag = std::abs(g);
  const double t = (-ag + std::sqrt(ag * ag + d2 * (r2 - c2))) / d2;
  return AffineDiscTest{false, exit_witness(t, phase, rho)};
}

std::optional<double> BallDomain::max_affine_disc_scale(const ComplexPoint& c, const ComplexPoint& d,
                                                        double rho) const {
  const ComplexPoint off = c - center_;
  const double oc = off.norm();
  if (!(oc < radius_)) return 0.0;
  const double d2 = d.norm2();
  if (d2 == 0.0) return std::numeric_limits<double>::infinity();
  // |off|^2 + t^2 |d|^2 + 2 t |<d, off>| = R^2 with t = rho s.
  const double ag = std::abs(inner(d, off));
  const double gap = (radius_ - oc) * (radius_ + oc);
  return gap / (ag + std::sqrt(ag * ag + d2 * gap)) / rho;
}

// ---------------------------------------------------------------- polydisc

PolydiscDomain::PolydiscDomain(ComplexPoint center, std::vector<double> radii)
    : center_(std::move(center)), radii_(std::move(radii)) {
  if (radii_.size() != center_.dim()) throw Error("PolydiscDomain: one radius per coordinate required");
  for (double r : radii_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error("PolydiscDomain: radii must be positive");
  }
}

Membership PolydiscDomain::do_membership(const ComplexPoint& z) const {
  for (std::size_t j = 0; j < z.dim(); ++j) {
    if (!(std::abs(z[j] - center_[j]) < radii_[j])) return Membership::outside;
  }
  return Membership::inside;
}

double PolydiscDomain::certified_radius(const ComplexPoint& z) const {
  require_same_dim(z, center_, "PolydiscDomain");
  double r = radii_[0];
  for (std::size_t j = 0; j < z.dim(); ++j) r = std::min(r, radii_[j] - std::abs(z[j] - center_[j]));
  return std::max(0.0, r);
}

EnclosingBall PolydiscDomain::enclosing_ball() const {
  double s = 0.0;
  for (double r : radii_) s += r * r;
  return {center_, std::sqrt(s)};
}

std::vector<DiscProjection> PolydiscDomain::disc_projections() const {
  std::vector<DiscProjection> out;
  const std::size_t n = center_.dim();
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexPoint coeff = ComplexPoint(n).with(j, 1.0 / radii_[j]);
    out.push_back({coeff, -center_[j] / radii_[j], "coordinate " + std::to_string(j + 1)});
  }
  return out;
}

std::optional<AffineDiscTest> PolydiscDomain::test_affine_disc(const ComplexPoint& c,
                                                               const ComplexPoint& d, double rho) const {
  require_same_dim(c, center_, "PolydiscDomain");
  require_same_dim(d, center_, "PolydiscDomain");
  std::optional<AffineDiscTest> worst;
  double worst_t = 0.0;
  for (std::size_t j = 0; j < c.dim(); ++j) {
    const cplx off = c[j] - center_[j];
    const double ad = std::abs(d[j]);
    if (std::abs(off) + rho * ad < radii_[j] * (1.0 - kStrictSlack)) continue;
    const double t = ad == 0.0 ? 0.0 : std::max(0.0, (radii_[j] - std::abs(off)) / ad);
    // zeta d_j aligned with off: zeta = t * phase(off) / phase(d_j)
    const cplx phase = unit_phase(off) * std::conj(unit_phase(d[j]));
    if (!worst || t < worst_t) {
      worst = AffineDiscTest{false, exit_witness(t, phase, rho)};
      worst_t = t;
    }
  }
  return worst ? *worst : AffineDiscTest{true, 0.0};
}

std::optional<double> PolydiscDomain::max_affine_disc_scale(const ComplexPoint& c, const ComplexPoint& d,
                                                            double rho) const {
  require_same_dim(c, center_, "PolydiscDomain");
  require_same_dim(d, center_, "PolydiscDomain");
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.dim(); ++j) {
    const double gap = radii_[j] - std::abs(c[j] - center_[j]);
    if (!(gap > 0.0)) return 0.0;
    const double ad = std::abs(d[j]);
    if (ad > 0.0) s = std::min(s, gap / (rho * ad));
  }
  return s;
}

// ---------------------------------------------------------------- product

ProductDomain::ProductDomain(std::vector<DomainPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error("ProductDomain: at least one factor required");
  for (const auto& f : factors_) {
    if (!f) throw Error("ProductDomain: null factor");
    dim_ += f->dimension();
  }
}

std::vector<ComplexPoint> ProductDomain::split(const ComplexPoint& z) const {
  if (z.dim() != dim_) throw Error("ProductDomain: dimension mismatch");
  std::vector<ComplexPoint> parts;
  std::size_t k = 0;
  for (const auto& f : factors_) {
    std::vector<cplx> c(z.coords().begin() + static_cast<std::ptrdiff_t>(k),
                        z.coords().begin() + static_cast<std::ptrdiff_t>(k + f->dimension()));
    parts.emplace_back(std::move(c));
    k += f->dimension();
  }
  return parts;
}

Membership ProductDomain::do_membership(const ComplexPoint& z) const {
  const auto parts = split(z);
  Membership result = Membership::inside;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Membership m = factors_[i]->membership(parts[i]);
    if (m == Membership::outside) return Membership::outside;
    if (m == Membership::indeterminate) result = Membership::indeterminate;
  }
  return result;
}

double ProductDomain::certified_radius(const ComplexPoint& z) const {
  const auto parts = split(z);
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < factors_.size(); ++i) r = std::min(r, factors_[i]->certified_radius(parts[i]));
  return r;
}

EnclosingBall ProductDomain::enclosing_ball() const {
  std::vector<cplx> center;
  double s = 0.0;
  for (const auto& f : factors_) {
    const auto b = f->enclosing_ball();
    center.insert(center.end(), b.center.coords().begin(), b.center.coords().end());
    s += b.radius * b.radius;
  }
  return {ComplexPoint(std::move(center)), std::sqrt(s)};
}

std::vector<DiscProjection> ProductDomain::disc_projections() const {
  std::vector<DiscProjection> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (const auto& p : factors_[i]->disc_projections()) {
      std::vector<cplx> coeff(dim_, 0.0);
      std::copy(p.coefficients.coords().begin(), p.coefficients.coords().end(),
                coeff.begin() + static_cast<std::ptrdiff_t>(k));
      out.push_back({ComplexPoint(std::move(coeff)), p.offset,
                     "factor " + std::to_string(i + 1) + " " + p.label});
    }
    k += factors_[i]->dimension();
  }
  return out;
}

std::optional<AffineDiscTest> ProductDomain::test_affine_disc(const ComplexPoint& c, const ComplexPoint& d,
                                                              double rho) const {
  const auto cs = split(c);
  const auto ds = split(d);
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto t = factors_[i]->test_affine_disc(cs[i], ds[i], rho);
    if (!t) return std::nullopt;
    if (!t->inside) return t;
  }
  return AffineDiscTest{true, 0.0};
}

std::optional<double> ProductDomain::max_affine_disc_scale(const ComplexPoint& c, const ComplexPoint& d,
                                                           double rho) const {
  const auto cs = split(c);
  const auto ds = split(d);
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto t = factors_[i]->max_affine_disc_scale(cs[i], ds[i], rho);
    if (!t) return std::nullopt;
    s = std::min(s, *t);
  }
  return s;
}

// ---------------------------------------------------------------- sublevel

SublevelDomain::SublevelDomain(ScalarField field, double level, DomainPtr ambient, ComplexPoint seed,
                               SublevelOptions options)
    : field_(std::move(field)), level_(level), ambient_(std::move(ambient)), options_(std::move(options)) {
  if (!std::isfinite(level_)) throw Error("SublevelDomain: level must be finite");
  if (!ambient_) throw Error("SublevelDomain: ambient domain required");
  if (ambient_->dimension() != field_.dim()) throw Error("SublevelDomain: field/ambient dimension mismatch");
  if (seed.dim() != field_.dim()) throw Error("SublevelDomain: seed dimension mismatch");
  if (!ambient_->contains(seed)) throw Error("SublevelDomain: seed outside the ambient domain");
  if (!(field_(seed) < level_)) throw Error("SublevelDomain: defining function at the seed must be below the level");

  if (options_.lipschitz) {
    if (!(*options_.lipschitz > 0.0)) throw Error("SublevelDomain: Lipschitz bound must be positive");
    lipschitz_ = *options_.lipschitz;
  } else {
    const auto ball = ambient_->enclosing_ball();
    CounterRng rng(0, stream_id("sublevel-lipschitz"));
    double max_grad = 0.0;
    for (std::size_t i = 0; i < options_.lipschitz_samples; ++i) {
      const ComplexPoint z = ball.center + rng.ball_point(field_.dim(), ball.radius);
      if (ambient_->certified_radius(z) <= 0.0) continue;
      double g2 = 0.0;
      if (field_.has_gradient()) {
        for (const auto& c : field_.gradient(z)) g2 += std::norm(c);
      } else {
        const double h = 1e-6 * std::max(1.0, z.max_abs());
        for (std::size_t j = 0; j < z.dim(); ++j) {
          for (const cplx e : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
            const double dfx = (field_(z.with(j, z[j] + h * e)) - field_(z.with(j, z[j] - h * e))) / (2 * h);
            g2 += dfx * dfx;
          }
        }
      }
      max_grad = std::max(max_grad, std::sqrt(g2));
    }
    lipschitz_ = std::max(options_.lipschitz_safety * max_grad, 1e-12);
  }

  anchors_.push_back(std::move(seed));
  for (const auto& a : options_.anchors) {
    if (a.dim() != field_.dim()) throw Error("SublevelDomain: anchor dimension mismatch");
    bool certified = false;
    for (const auto& known : anchors_) {
      if (certify_segment(known, a) == Membership::inside) {
        certified = true;
        break;
      }
    }
    if (!certified) throw Error("SublevelDomain: anchor " + to_string(a) + " is not certified in the seed's component");
    anchors_.push_back(a);
  }
}

double SublevelDomain::certified_radius(const ComplexPoint& z) const {
  const double amb = ambient_->certified_radius(z);
  if (amb <= 0.0) return 0.0;
  const double fz = field_(z);
  if (!(fz < level_)) return 0.0;
  return std::min((level_ - fz) / lipschitz_, amb);
}

EnclosingBall SublevelDomain::enclosing_ball() const {
  return options_.enclosing ? *options_.enclosing : ambient_->enclosing_ball();
}

Membership SublevelDomain::certify_segment(const ComplexPoint& a, const ComplexPoint& b) const {
  const double len = distance(a, b);
  const double ra = certified_radius(a);
  const double rb = certified_radius(b);
  if (ra <= 0.0 || rb <= 0.0) return Membership::outside;
  struct Piece {
    double t0, t1, r0, r1;
  };
  std::vector<Piece> stack{{0.0, 1.0, ra, rb}};
  std::size_t evaluations = 2;
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    if (len * (p.t1 - p.t0) < p.r0 + p.r1) continue;
    if (evaluations >= options_.segment_budget) return Membership::indeterminate;
    const double tm = 0.5 * (p.t0 + p.t1);
    const double rm = certified_radius(a + tm * (b - a));
    ++evaluations;
    if (rm <= 0.0) return Membership::outside;
    stack.push_back({p.t0, tm, p.r0, rm});
    stack.push_back({tm, p.t1, rm, p.r1});
  }
  return Membership::inside;
}

Membership SublevelDomain::do_membership(const ComplexPoint& z) const {
  const Membership amb = ambient_->membership(z);
  if (amb == Membership::outside) return Membership::outside;
  if (!(field_(z) < level_)) return Membership::outside;
  if (amb == Membership::indeterminate) return Membership::indeterminate;
  std::vector<std::size_t> order(anchors_.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(anchors_.size());
  for (std::size_t i = 0; i < anchors_.size(); ++i) dist[i] = distance(anchors_[i], z);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return dist[i] < dist[j]; });
  for (auto i : order) {
    if (certify_segment(anchors_[i], z) == Membership::inside) return Membership::inside;
  }
  return Membership::indeterminate;
}

// ---------------------------------------------------------------- slices

ProductSlice::ProductSlice(std::size_t base_dim, std::size_t total_dim) : m_(base_dim), n_(total_dim) {
  if (m_ == 0) throw Error("ProductSlice: base dimension must be positive");
  if (n_ <= m_) throw Error("ProductSlice: total dimension must exceed the base dimension");
}

ComplexPoint ProductSlice::embed(const ComplexPoint& z) const {
  if (z.dim() != m_) throw Error("ProductSlice::embed: expected a point of C^" + std::to_string(m_));
  return slice_embed(z, n_);
}

ComplexPoint ProductSlice::project(const ComplexPoint& z) const {
  if (z.dim() != n_) throw Error("ProductSlice::project: expected a point of C^" + std::to_string(n_));
  return ComplexPoint(std::vector<cplx>(z.coords().begin(), z.coords().begin() + static_cast<std::ptrdiff_t>(m_)));
}

ComplexPoint slice_embed(const ComplexPoint& z, std::size_t n) {
  if (n < z.dim()) throw Error("slice_embed: target dimension smaller than the point's dimension");
  std::vector<cplx> c(z.coords().begin(), z.coords().end());
  c.resize(n, 0.0);
  return ComplexPoint(std::move(c));
}

DomainPtr unit_ball(std::size_t dim) { return std::make_shared<BallDomain>(ComplexPoint(dim), 1.0); }

DomainPtr unit_polydisc(std::size_t dim) {
  return std::make_shared<PolydiscDomain>(ComplexPoint(dim), std::vector<double>(dim, 1.0));
}

}  // namespace kobalab
