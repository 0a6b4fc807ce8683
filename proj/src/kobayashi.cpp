#include "kobalab/kobayashi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

#include "kobalab/error.hpp"
#include "kobalab/parallel.hpp"
#include "kobalab/random.hpp"
#include "kobalab/simplex.hpp"

namespace kobalab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Lower bounds are shrunk by this relative factor to absorb rounding.
constexpr double kLowerSafety = 1e-12;

void require_margin(double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw Error("margin must lie in (0, 1)");
}

double safe_lower(double v) { return std::max(0.0, v * (1.0 - kLowerSafety) - 1e-15); }

// Covering of |zeta| <= rho by certified balls, without the center membership
// check: callers know a point of the image is in the right component.
DiscCertificate disc_in_open_set(const AnalyticDisc& disc, const DomainOracle& domain, double rho,
                                 std::size_t max_evaluations) {
  DiscCertificate cert;
  cert.rho = rho;
  if (max_evaluations == 0) return cert;
  if (auto t = domain.test_affine_disc(disc.center(), disc.direction(), rho)) {
    cert.evaluations = 1;
    cert.status = t->inside ? DiscStatus::certified : DiscStatus::rejected;
    cert.witness = t->witness;
    return cert;
  }
  struct Cell {
    double x, y, h;
  };
  const double dnorm = disc.direction().norm();
  std::deque<Cell> queue{{0.0, 0.0, rho}};
  while (!queue.empty()) {
    const Cell cell = queue.front();
    queue.pop_front();
    const double nx = std::max(std::abs(cell.x) - cell.h, 0.0);
    const double ny = std::max(std::abs(cell.y) - cell.h, 0.0);
    if (std::hypot(nx, ny) > rho) continue;
    cplx s(cell.x, cell.y);
    if (std::abs(s) > rho) s *= rho / std::abs(s);
    const double cover = std::abs(s - cplx(cell.x, cell.y)) + cell.h * std::sqrt(2.0);
    if (cert.evaluations >= max_evaluations) {
      cert.status = DiscStatus::indeterminate;
      return cert;
    }
    ++cert.evaluations;
    const double r = domain.certified_radius(disc(s));
    if (r <= 0.0) {
      cert.status = DiscStatus::rejected;
      cert.witness = s;
      return cert;
    }
    if (r > dnorm * cover * (1.0 + 1e-12)) continue;
    if (cell.h < 1e-13 * rho) {
      cert.status = DiscStatus::indeterminate;
      return cert;
    }
    const double q = cell.h / 2.0;
    for (double sx : {-q, q})
      for (double sy : {-q, q}) queue.push_back({cell.x + sx, cell.y + sy, q});
  }
  cert.status = DiscStatus::certified;
  return cert;
}

DiscCertificate certify_link(const AnalyticDisc& disc, const DomainOracle& domain, double rho, Budget& budget) {
  DiscCertificate c = disc_in_open_set(disc, domain, rho, budget.remaining());
  budget.spend(std::min(c.evaluations, budget.remaining()));
  return c;
}

struct LinkFit {
  double cost = kInf;
  double r = 0.0;
  cplx lambda0;
  // Finite surrogate steering the simplex toward feasibility: the cost when
  // feasible, otherwise a large value decreasing as r approaches the radius needed.
  double objective = kInf;
};

constexpr double kPenalty = 1e6;

// Largest certified disc lambda -> p + (lambda0 + r zeta) e, |zeta| <= rho, and
// its Poincare cost between lambda = 0 and lambda = 1.
LinkFit fit_link(const DomainOracle& domain, const ComplexPoint& p, const ComplexPoint& e, cplx lambda0, double rho,
                 double rel_tol, Budget& budget) {
  LinkFit fit;
  fit.lambda0 = lambda0;
  const double enorm = e.norm();
  const double need = std::max(std::abs(lambda0), std::abs(1.0 - lambda0)) / rho;
  const ComplexPoint c = p + lambda0 * e;
  const double big = domain.enclosing_ball().radius * (1.0 + 1e-9) / (rho * enorm);
  auto infeasible = [&](double r) {
    fit.objective = r > 0.0 ? kPenalty * (1.0 + need / r) : kPenalty * 1e3;
    return fit;
  };
  if (big <= need) return infeasible(big);

  double lo = 0.0;
  bool exact = false;
  if (!budget.spend()) return fit;
  if (auto s = domain.max_affine_disc_scale(c, e, rho)) {
    if (*s <= need) return infeasible(*s);
    for (double shrink : {1e-10, 1e-7}) {
      const double r = std::min(*s, big) * (1.0 - shrink);
      if (r <= need) break;
      if (certify_link(AnalyticDisc(c, r * e), domain, rho, budget).status == DiscStatus::certified) {
        lo = r;
        exact = true;
        break;
      }
    }
  }
  if (!exact) {
    if (!budget.spend()) return fit;
    const double rc = domain.certified_radius(c);
    if (rc <= 0.0) return infeasible(0.0);
    lo = std::min(0.999 * rc / (rho * enorm), big);
    double hi = big;
    while (hi - lo > rel_tol * hi && !budget.exhausted()) {
      const double mid = 0.5 * (lo + hi);
      const auto cert = certify_link(AnalyticDisc(c, mid * e), domain, rho, budget);
      if (cert.status == DiscStatus::certified) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  if (lo <= need * (1.0 + 1e-12)) return infeasible(lo);
  fit.r = lo;
  fit.cost = poincare_distance(DiscPoint(-lambda0 / (rho * lo)), DiscPoint((1.0 - lambda0) / (rho * lo)));
  fit.objective = fit.cost;
  return fit;
}

ChainLink link_from_fit(const ComplexPoint& p, const ComplexPoint& e, const LinkFit& fit) {
  const AnalyticDisc disc(p + fit.lambda0 * e, fit.r * e);
  return {disc, DiscPoint(-fit.lambda0 / fit.r), DiscPoint((1.0 - fit.lambda0) / fit.r)};
}

cplx projection_parameter(const ComplexPoint& target, const ComplexPoint& p, const ComplexPoint& e) {
  return inner(target - p, e) / e.norm2();
}

struct Candidate {
  double cost = kInf;
  std::optional<DiscChain> chain;
  std::size_t used = 0;
};

// Single-link restart: simplex over lambda0.
Candidate single_link(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w, cplx start,
                      double step, double rho, Budget& budget) {
  const ComplexPoint e = w - z;
  LinkFit best;
  auto objective = [&](const std::vector<double>& x) {
    const LinkFit f = fit_link(domain, z, e, cplx(x[0], x[1]), rho, 1e-6, budget);
    if (f.cost < best.cost) best = f;
    return f.objective;
  };
  SimplexOptions so;
  so.max_evaluations = std::numeric_limits<std::size_t>::max();
  so.initial_step = step;
  so.point_tolerance = 1e-9;
  nelder_mead(objective, {start.real(), start.imag()}, so, [&] { return budget.exhausted(); });
  Candidate c;
  c.used = budget.used();
  if (std::isfinite(best.cost)) {
    c.cost = best.cost;
    c.chain = DiscChain({link_from_fit(z, e, best)});
  }
  return c;
}

// k-link restart: simplex over the offsets of the k-1 intermediate points from
// the straight line together with the disc center of every link (in the link's
// own parameter, 0 and 1 being its endpoints).
Candidate multi_link(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w, std::size_t k,
                     const std::vector<double>& offsets, double step, double rho, Budget& budget) {
  const std::size_t n = z.dim();
  const std::size_t no = 2 * n * (k - 1);
  const ComplexPoint center = domain.enclosing_ball().center;
  auto points_of = [&](const std::vector<double>& x) {
    std::vector<ComplexPoint> pts{z};
    for (std::size_t j = 1; j < k; ++j) {
      ComplexPoint y = z + (static_cast<double>(j) / static_cast<double>(k)) * (w - z);
      std::vector<cplx> off(n);
      for (std::size_t i = 0; i < n; ++i) off[i] = cplx(x[2 * (n * (j - 1) + i)], x[2 * (n * (j - 1) + i) + 1]);
      pts.push_back(y + ComplexPoint(off));
    }
    pts.push_back(w);
    return pts;
  };
  auto fits_of = [&](const std::vector<double>& x, double tol) {
    const auto pts = points_of(x);
    std::vector<LinkFit> fits;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      const ComplexPoint e = pts[j + 1] - pts[j];
      if (e.norm() == 0.0) return std::vector<LinkFit>{};
      fits.push_back(fit_link(domain, pts[j], e, cplx(x[no + 2 * j], x[no + 2 * j + 1]), rho, tol, budget));
    }
    return fits;
  };

  // Start each link at the better of the midpoint disc and the disc centered at
  // the projection of the enclosing-ball center.
  std::vector<double> x0 = offsets;
  {
    const auto pts = points_of(offsets);
    for (std::size_t j = 0; j < k; ++j) {
      const ComplexPoint e = pts[j + 1] - pts[j];
      cplx pick = 0.5;
      if (e.norm() > 0.0) {
        const cplx lc = projection_parameter(center, pts[j], e);
        if (fit_link(domain, pts[j], e, lc, rho, 1e-3, budget).objective <
            fit_link(domain, pts[j], e, 0.5, rho, 1e-3, budget).objective) {
          pick = lc;
        }
      }
      x0.push_back(pick.real());
      x0.push_back(pick.imag());
    }
  }
  auto objective = [&](const std::vector<double>& x) {
    const auto fits = fits_of(x, 1e-3);
    if (fits.empty()) return kInf;
    double s = 0.0;
    for (const auto& f : fits) s += f.objective;
    return s;
  };
  SimplexOptions so;
  so.max_evaluations = std::numeric_limits<std::size_t>::max();
  so.initial_steps.assign(no, step);
  so.initial_steps.resize(x0.size(), 0.1);
  so.point_tolerance = 1e-7;
  // Keep a quarter of the budget for the final refit.
  const std::size_t stop_at = budget.used() + budget.remaining() * 3 / 4;
  const auto res = nelder_mead(objective, x0, so, [&] { return budget.used() >= stop_at || budget.exhausted(); });
  Candidate c;
  const auto pts = points_of(res.x);
  const auto fits = fits_of(res.x, 1e-6);
  c.used = budget.used();
  if (fits.empty()) return c;
  for (const auto& f : fits)
    if (!std::isfinite(f.cost)) return c;
  std::vector<ChainLink> links;
  double cost = 0.0;
  for (std::size_t j = 0; j < fits.size(); ++j) {
    links.push_back(link_from_fit(pts[j], pts[j + 1] - pts[j], fits[j]));
    cost += fits[j].cost;
  }
  c.cost = cost;
  c.chain = DiscChain(std::move(links));
  return c;
}

double ball_distance(const ComplexPoint& z, const ComplexPoint& w) {
  // m^2 = (|z-w|^2 - |(z-w) ^ w|^2) / |1 - <z,w>|^2, 1 - m^2 = (1-|z|^2)(1-|w|^2)/|1 - <z,w>|^2
  const ComplexPoint dz = z - w;
  double wedge = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j)
    for (std::size_t k = j + 1; k < z.dim(); ++k) wedge += std::norm(dz[j] * w[k] - dz[k] * w[j]);
  const double num = std::max(0.0, dz.norm2() - wedge);
  const double den = std::norm(1.0 - inner(z, w));
  const double m = std::min(std::sqrt(num / den), 1.0);
  const double one_minus = (1.0 - z.norm2()) * (1.0 - w.norm2()) / den;
  return artanh_quotient(m, one_minus);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool Budget::spend(std::size_t n) noexcept {
  if (n > remaining()) return false;
  used_ += n;
  return true;
}

const char* to_string(DiscStatus s) noexcept {
  switch (s) {
    case DiscStatus::certified: return "certified";
    case DiscStatus::rejected: return "rejected";
    case DiscStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

DiscCertificate disc_in_domain(const AnalyticDisc& disc, const DomainOracle& domain, double margin,
                               std::size_t max_evaluations) {
  require_margin(margin);
  if (disc.dim() != domain.dimension()) throw Error("disc_in_domain: dimension mismatch");
  const double rho = 1.0 - margin;
  DiscCertificate cert;
  cert.rho = rho;
  if (max_evaluations == 0) return cert;
  cert.evaluations = 1;
  switch (domain.membership(disc.center())) {
    case Membership::outside:
      cert.status = DiscStatus::rejected;
      cert.witness = 0.0;
      return cert;
    case Membership::indeterminate:
      return cert;
    case Membership::inside:
      break;
  }
  DiscCertificate rest = disc_in_open_set(disc, domain, rho, max_evaluations - 1);
  rest.evaluations += 1;
  return rest;
}

double chain_cost(const DiscChain& chain, double margin) {
  require_margin(margin);
  const double rho = 1.0 - margin;
  double s = 0.0;
  for (const auto& l : chain.links()) {
    const cplx a = l.zeta_in.value() / rho;
    const cplx b = l.zeta_out.value() / rho;
    if (std::abs(a) > DiscPoint::kMaxModulus || std::abs(b) > DiscPoint::kMaxModulus) {
      throw Error("chain_cost: link endpoint outside the certified radius 1 - margin");
    }
    s += poincare_distance(DiscPoint(a), DiscPoint(b));
  }
  return s;
}

double chain_upper_bound(const DomainOracle& domain, const DiscChain& chain, double margin) {
  const double cost = chain_cost(chain, margin);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto cert = disc_in_domain(chain.links()[i].disc, domain, margin);
    if (cert.status == DiscStatus::rejected) {
      throw Error("chain_upper_bound: link " + std::to_string(i) + " leaves the domain at zeta = (" +
                  fmt(cert.witness.real()) + ", " + fmt(cert.witness.imag()) + ")");
    }
    if (cert.status == DiscStatus::indeterminate) {
      throw Indeterminate("chain_upper_bound: link " + std::to_string(i) + " could not be certified");
    }
  }
  return cost;
}

UpperBound search_upper_bound(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w,
                              const SearchOptions& options) {
  require_margin(options.margin);
  require_same_dim(z, w, "search_upper_bound");
  if (z.dim() != domain.dimension()) throw Error("search_upper_bound: dimension mismatch");
  if (options.restarts == 0 || options.max_links == 0) throw Error("search_upper_bound: need restarts and links");
  UpperBound out;
  Budget head(options.budget);
  if (!head.spend(2)) {
    out.reason = "budget exhausted before any certificate";
    out.budget_used = head.used();
    return out;
  }
  const Membership mz = domain.membership(z);
  const Membership mw = domain.membership(w);
  if (mz == Membership::outside || mw == Membership::outside) {
    throw Error("search_upper_bound: endpoint outside the domain");
  }
  if (mz == Membership::indeterminate || mw == Membership::indeterminate) {
    out.reason = "endpoint membership indeterminate";
    out.budget_used = head.used();
    return out;
  }
  if (z == w) {
    out.value = 0.0;
    out.budget_used = head.used();
    return out;
  }
  const double rho = 1.0 - options.margin;

  Candidate best;
  for (const auto& seed : options.seeds) {
    const double scale = std::max({1.0, z.max_abs(), w.max_abs()});
    if (distance(seed.start(), z) > DiscChain::kStitchTolerance * scale ||
        distance(seed.end(), w) > DiscChain::kStitchTolerance * scale) {
      throw Error("search_upper_bound: seed chain does not join the requested points");
    }
    bool ok = true;
    for (const auto& l : seed.links()) {
      const auto cert = disc_in_domain(l.disc, domain, options.margin, head.remaining());
      head.spend(std::min(cert.evaluations, head.remaining()));
      if (cert.status != DiscStatus::certified) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const double cost = chain_cost(seed, options.margin);
    if (cost < best.cost) best = {cost, seed, 0};
  }

  const std::size_t pool = head.remaining();
  const std::size_t share = pool / options.restarts;
  const ComplexPoint e = w - z;
  const EnclosingBall enc = domain.enclosing_ball();
  const cplx lc = projection_parameter(enc.center, z, e);
  const double spread = std::max(1.0, std::abs(lc - 0.5));
  const auto results = parallel_map(options.restarts, [&](std::size_t i) {
    Budget b(share + (i == 0 ? pool - share * options.restarts : 0));
    CounterRng rng(options.seed, stream_id("search", i));
    const std::size_t k = 1 + i % options.max_links;
    if (k == 1) {
      const cplx start = i == 0 ? lc : lc + rng.disc_point(0.5 * spread);
      return single_link(domain, z, w, start, 0.1 * spread, rho, b);
    }
    std::vector<double> x(2 * z.dim() * (k - 1));
    const double amp = i < options.max_links ? 0.0 : 0.25 * enc.radius;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const ComplexPoint straight = z + (static_cast<double>(j + 1) / static_cast<double>(k)) * (w - z);
      const ComplexPoint off = 0.5 * (enc.center - straight) + rng.ball_point(z.dim(), amp);
      for (std::size_t t = 0; t < z.dim(); ++t) {
        x[2 * (z.dim() * j + t)] = off[t].real();
        x[2 * (z.dim() * j + t) + 1] = off[t].imag();
      }
    }
    return multi_link(domain, z, w, k, x, 0.05 * enc.radius, rho, b);
  });
  std::size_t used = head.used();
  for (const auto& r : results) {
    used += r.used;
    if (r.cost < best.cost) best = r;
  }
  out.budget_used = used;
  if (!std::isfinite(best.cost)) {
    out.reason = "no certified chain found within budget";
    return out;
  }
  out.value = best.cost;
  out.chain = best.chain;
  return out;
}

LowerBound lower_bound(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w) {
  require_same_dim(z, w, "lower_bound");
  if (z.dim() != domain.dimension()) throw Error("lower_bound: dimension mismatch");
  LowerBound best{0.0, "trivial"};
  if (z == w) return best;
  const EnclosingBall enc = domain.enclosing_ball();
  const ComplexPoint zs = (1.0 / enc.radius) * (z - enc.center);
  const ComplexPoint ws = (1.0 / enc.radius) * (w - enc.center);
  if (zs.norm() < 1.0 && ws.norm() < 1.0) {
    best = {safe_lower(ball_distance(zs, ws)), "enclosing ball"};
  }
  for (const auto& proj : domain.disc_projections()) {
    const cplx a = proj.apply(z);
    const cplx b = proj.apply(w);
    if (!(std::abs(a) <= DiscPoint::kMaxModulus && std::abs(b) <= DiscPoint::kMaxModulus)) continue;
    const double v = safe_lower(poincare_distance(DiscPoint(a), DiscPoint(b)));
    if (v > best.value) best = {v, "projection " + proj.label};
  }
  return best;
}

std::optional<double> DistanceEstimate::width() const {
  if (!upper) return std::nullopt;
  return *upper - lower;
}

DistanceEstimate estimate_distance(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w,
                                   const SearchOptions& options) {
  DistanceEstimate est;
  const LowerBound lb = lower_bound(domain, z, w);
  est.lower = lb.value;
  est.lower_certificate = lb.certificate;
  UpperBound ub = search_upper_bound(domain, z, w, options);
  est.budget_used = ub.budget_used;
  est.upper_reason = ub.reason;
  if (ub.value) {
    if (est.lower > *ub.value + 1e-12) {
      throw Error("estimate_distance: lower bound " + fmt(est.lower) + " exceeds certified upper bound " +
                  fmt(*ub.value));
    }
    est.lower = std::min(est.lower, *ub.value);
    est.upper = ub.value;
    est.chain = std::move(ub.chain);
  }
  return est;
}

MetricEstimate infinitesimal_bounds(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& v,
                                    const MetricOptions& options) {
  require_margin(options.margin);
  require_same_dim(z, v, "infinitesimal_bounds");
  if (z.dim() != domain.dimension()) throw Error("infinitesimal_bounds: dimension mismatch");
  const double vn = v.norm();
  if (vn == 0.0) throw Error("infinitesimal_bounds: tangent vector must be nonzero");
  if (!domain.contains(z)) throw Error("infinitesimal_bounds: point outside the domain");
  const ComplexPoint u = (1.0 / vn) * v;
  const double rho = 1.0 - options.margin;
  const EnclosingBall enc = domain.enclosing_ball();
  Budget budget(options.budget);

  // Disc lambda -> z + (lambda0 + R xi) u, |xi| < 1 with R = rho r: k(z; u) <= R / (R^2 - |lambda0|^2).
  auto radius_at = [&](cplx lambda0) -> double {
    const ComplexPoint c = z + lambda0 * u;
    const double big = enc.radius * (1.0 + 1e-9) / rho;
    if (!budget.spend()) return 0.0;
    if (auto s = domain.max_affine_disc_scale(c, u, rho)) {
      for (double shrink : {1e-10, 1e-7}) {
        const double r = std::min(*s, big) * (1.0 - shrink);
        if (r > 0.0 && certify_link(AnalyticDisc(c, r * u), domain, rho, budget).status == DiscStatus::certified) {
          return r;
        }
      }
    }
    if (!budget.spend()) return 0.0;
    const double rc = domain.certified_radius(c);
    if (rc <= 0.0) return 0.0;
    double lo = std::min(0.999 * rc / rho, big);
    double hi = big;
    while (hi - lo > options.relative_tolerance * hi && !budget.exhausted()) {
      const double mid = 0.5 * (lo + hi);
      const auto cert = disc_in_open_set(AnalyticDisc(c, mid * u), domain, rho,
                                         std::min(options.disc_budget, budget.remaining()));
      budget.spend(std::min(cert.evaluations, budget.remaining()));
      if (cert.status == DiscStatus::certified) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  auto bound_at = [&](cplx lambda0) {
    const double big_r = rho * radius_at(lambda0);
    const double l2 = std::norm(lambda0);
    if (!(big_r * big_r > l2 * (1.0 + 1e-12))) return kInf;
    return big_r / ((big_r - std::abs(lambda0)) * (big_r + std::abs(lambda0)));
  };
  double best = bound_at(0.0);
  const cplx lc = inner(enc.center - z, u);
  SimplexOptions so;
  so.max_evaluations = std::numeric_limits<std::size_t>::max();
  so.point_tolerance = 1e-10;
  const double delta = domain.certified_radius(z);
  for (cplx start : {cplx(0.0), lc}) {
    so.initial_step = std::max(0.25 * delta, 1e-6);
    const std::size_t cap = budget.used() + budget.remaining() / 2;
    const auto res = nelder_mead([&](const std::vector<double>& x) { return bound_at(cplx(x[0], x[1])); },
                                 {start.real(), start.imag()}, so,
                                 [&] { return budget.exhausted() || budget.used() >= cap; });
    best = std::min(best, res.value);
  }

  MetricEstimate out;
  out.upper = std::isfinite(best) ? vn * best : kInf;
  const ComplexPoint zs = (1.0 / enc.radius) * (z - enc.center);
  const ComplexPoint vs = (1.0 / enc.radius) * v;
  const double q = 1.0 - zs.norm2();
  if (q > 0.0) {
    out.lower = safe_lower(std::sqrt(vs.norm2() / q + std::norm(inner(vs, zs)) / (q * q)));
    out.lower_certificate = "enclosing ball";
  }
  for (const auto& proj : domain.disc_projections()) {
    const double a = std::abs(proj.apply(z));
    if (!(a < 1.0)) continue;
    const double val = safe_lower(std::abs(proj.apply_linear(v)) / ((1.0 - a) * (1.0 + a)));
    if (val > out.lower) {
      out.lower = val;
      out.lower_certificate = "projection " + proj.label;
    }
  }
  if (std::isfinite(out.upper) && out.lower > out.upper) {
    if (out.lower > out.upper * (1.0 + 1e-9)) throw Error("infinitesimal_bounds: inconsistent bounds");
    out.lower = out.upper;
  }
  return out;
}

SliceReport slice_identity_check(const DomainOracle& g, const DomainOracle& omega, const ComplexPoint& z,
                                 const ComplexPoint& w, const SliceOptions& options) {
  const ProductSlice slice(g.dimension(), omega.dimension());
  require_same_dim(z, w, "slice_identity_check");
  if (z.dim() != g.dimension()) throw Error("slice_identity_check: points must lie in the base domain's space");

  SliceReport rep;
  // Sandwich hypothesis G x {0} in Omega in G x C^(n-m), spot-checked.
  auto sample_in = [&](const DomainOracle& d, const char* label, auto&& check) {
    const EnclosingBall enc = d.enclosing_ball();
    CounterRng rng(options.seed, stream_id(label));
    std::size_t found = 0;
    for (std::size_t tries = 0; found < options.sandwich_samples && tries < 64 * options.sandwich_samples; ++tries) {
      const ComplexPoint p = enc.center + rng.ball_point(d.dimension(), enc.radius);
      if (!d.contains(p)) continue;
      ++found;
      check(p);
    }
    return found;
  };
  rep.sandwich_checked += sample_in(g, "sandwich-base", [&](const ComplexPoint& p) {
    if (omega.membership(slice.embed(p)) == Membership::outside) {
      throw Error("slice_identity_check: " + to_string(p) + " is in G but its slice image is not in Omega");
    }
  });
  rep.sandwich_checked += sample_in(omega, "sandwich-total", [&](const ComplexPoint& p) {
    if (g.membership(slice.project(p)) == Membership::outside) {
      throw Error("slice_identity_check: " + to_string(p) + " is in Omega but projects outside G");
    }
  });

  rep.g = estimate_distance(g, z, w, options.search);
  SearchOptions os = options.search;
  if (rep.g.chain) os.seeds.push_back(rep.g.chain->embedded(omega.dimension()));
  const ComplexPoint zt = slice.embed(z);
  const ComplexPoint wt = slice.embed(w);
  rep.omega = estimate_distance(omega, zt, wt, os);
  rep.omega_lower_own = rep.omega.lower;
  rep.omega_upper_own = rep.omega.upper;
  // Projection onto the first m coordinates maps Omega into G.
  if (rep.g.lower > rep.omega.lower) {
    rep.omega.lower = rep.g.lower;
    rep.omega.lower_certificate = "projection to G: " + rep.g.lower_certificate;
  }
  if (rep.omega.upper && rep.omega.lower > *rep.omega.upper) {
    throw Error("slice_identity_check: projected lower bound exceeds the certified upper bound in Omega");
  }
  const double tol = options.tolerance;
  const double lo = std::max(rep.g.lower, rep.omega.lower);
  const double hi = std::min(rep.g.upper.value_or(kInf), rep.omega.upper.value_or(kInf));
  rep.overlap = lo <= hi + tol;
  rep.upper_transfer = rep.g.upper && rep.omega.upper && *rep.omega.upper <= *rep.g.upper + tol;
  rep.lower_transfer = rep.omega.lower >= rep.g.lower - tol;
  rep.passed = rep.overlap && rep.upper_transfer && rep.lower_transfer;
  return rep;
}

CauchyTable cauchy_table(const DomainOracle& omega, const SibonyLadder& ladder, double margin, double ratio_floor) {
  require_margin(margin);
  const std::size_t n = omega.dimension();
  const std::size_t depth = ladder.depth();
  if (n < 2) throw Error("cauchy_table: domain dimension must be >= 2");
  if (depth < 2) throw Error("cauchy_table: ladder depth must be >= 2");
  if (!(ratio_floor > 0.0 && ratio_floor < 1.0)) throw Error("cauchy_table: ratio floor must lie in (0, 1)");
  for (std::size_t nu = 1; nu <= depth; ++nu) {
    const ComplexPoint x = slice_embed(ladder.point(nu).to_point(), n);
    const Membership m = omega.membership(x);
    if (m == Membership::outside) throw Error("cauchy_table: lifted ladder point nu=" + std::to_string(nu) + " is not in the domain");
    if (m == Membership::indeterminate) {
      throw Indeterminate("cauchy_table: membership of lifted ladder point nu=" + std::to_string(nu) + " undecided");
    }
  }
  const auto uppers = parallel_map(depth - 1, [&](std::size_t i) {
    const std::size_t nu = i + 1;
    try {
      return chain_upper_bound(omega, ladder.link(nu).embedded(n), margin);
    } catch (const Indeterminate& e) {
      throw Indeterminate("cauchy_table: nu=" + std::to_string(nu) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("cauchy_table: nu=" + std::to_string(nu) + ": " + e.what());
    }
  });
  CauchyTable t;
  t.margin = margin;
  double observed = 0.0;
  for (std::size_t i = 1; i < uppers.size(); ++i) observed = std::max(observed, uppers[i] / uppers[i - 1]);
  t.observed_ratio = observed;
  t.ratio = std::max(observed, ratio_floor);
  if (t.ratio >= 1.0) throw Error("cauchy_table: link bounds do not decay geometrically");
  const double geometric = uppers.back() * t.ratio / (1.0 - t.ratio);
  t.rows.resize(uppers.size());
  double suffix = 0.0;
  for (std::size_t i = uppers.size(); i-- > 0;) {
    suffix += uppers[i];
    t.rows[i] = {i + 1, uppers[i], suffix + geometric, slice_embed(ladder.point(i + 1).to_point(), n).norm()};
  }
  return t;
}

std::string CauchyTable::csv() const {
  std::string out = "nu,U,T,norm\n";
  for (const auto& r : rows) out += std::to_string(r.nu) + "," + fmt(r.upper) + "," + fmt(r.tail) + "," + fmt(r.norm) + "\n";
  return out;
}

}  // namespace kobalab
