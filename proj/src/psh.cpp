#include "kobalab/psh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kobalab/error.hpp"
#include "kobalab/parallel.hpp"
#include "kobalab/random.hpp"

namespace kobalab {

namespace {

void require_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error("finite-difference step must be positive");
}

// Real coordinate a of C^n: 2j -> x_j, 2j+1 -> y_j.
ComplexPoint shifted(const ComplexPoint& z, std::size_t a, double h) {
  const std::size_t j = a / 2;
  return z.with(j, z[j] + (a % 2 == 0 ? cplx(h, 0.0) : cplx(0.0, h)));
}

double min_eigenvalue(const LeviMatrix& m) {
  const LeviMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<LeviMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigenvalue solver failed");
  return es.eigenvalues().minCoeff();
}

std::vector<cplx> gradient_of(const ScalarField& f, const ComplexPoint& z, double step, bool force_fd) {
  if (f.has_gradient() && !force_fd) return f.gradient(z);
  return gradient_fd(f, z, step);
}

LeviMatrix levi_of(const ScalarField& f, const ComplexPoint& z, double step, bool force_fd) {
  if (f.has_levi() && !force_fd) return f.levi(z);
  return levi_matrix_fd(f, z, step);
}

double pick_step(const GridSpec& spec, const ComplexPoint& z) { return spec.step > 0.0 ? spec.step : default_step(z); }

}  // namespace

const char* to_string(LeviMode m) noexcept { return m == LeviMode::analytic ? "analytic" : "finite-difference"; }

double default_step(const ComplexPoint& z) { return 1e-4 * std::max(1.0, z.max_abs()); }

LeviMatrix levi_matrix_fd(const ScalarField& f, const ComplexPoint& z, double step) {
  require_step(step);
  const std::size_t n = z.dim();
  const std::size_t m = 2 * n;
  const double f0 = f(z);
  Eigen::MatrixXd hess(m, m);
  const double h2 = step * step;
  for (std::size_t a = 0; a < m; ++a) {
    hess(a, a) = (f(shifted(z, a, step)) - 2.0 * f0 + f(shifted(z, a, -step))) / h2;
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = (f(shifted(shifted(z, a, step), b, step)) - f(shifted(shifted(z, a, step), b, -step)) -
                        f(shifted(shifted(z, a, -step), b, step)) + f(shifted(shifted(z, a, -step), b, -step))) /
                       (4.0 * h2);
      hess(a, b) = v;
      hess(b, a) = v;
    }
  }
  LeviMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double re = hess(2 * j, 2 * k) + hess(2 * j + 1, 2 * k + 1);
      const double im = hess(2 * j + 1, 2 * k) - hess(2 * j, 2 * k + 1);
      l(j, k) = 0.25 * cplx(re, im);
    }
  }
  return 0.5 * (l + l.adjoint());
}

std::vector<cplx> gradient_fd(const ScalarField& f, const ComplexPoint& z, double step) {
  require_step(step);
  std::vector<cplx> g(z.dim());
  for (std::size_t j = 0; j < z.dim(); ++j) {
    const double fx = (f(shifted(z, 2 * j, step)) - f(shifted(z, 2 * j, -step))) / (2.0 * step);
    const double fy = (f(shifted(z, 2 * j + 1, step)) - f(shifted(z, 2 * j + 1, -step))) / (2.0 * step);
    g[j] = cplx(fx, fy);
  }
  return g;
}

LeviReport levi_min_eigenvalue(const ScalarField& f, const ComplexPoint& z, double step, bool force_fd) {
  require_step(step);
  if (z.dim() != f.dim()) throw Error("levi_min_eigenvalue: dimension mismatch");
  const bool analytic = f.has_levi() && !force_fd;
  const LeviMatrix l = levi_of(f, z, step, force_fd);
  if (!l.allFinite()) throw Error("levi_min_eigenvalue: non-finite Levi matrix at " + to_string(z));
  return {z, min_eigenvalue(l), step, analytic ? LeviMode::analytic : LeviMode::finite_difference};
}

double gradient_nonvanishing(const ScalarField& f, const ComplexPoint& z, double step, bool force_fd) {
  require_step(step);
  double s = 0.0;
  for (const cplx& c : gradient_of(f, z, step, force_fd)) s += std::norm(c);
  if (!std::isfinite(s)) throw Error("gradient_nonvanishing: non-finite gradient at " + to_string(z));
  return std::sqrt(s);
}

double strong_pseudoconvexity_check(const ScalarField& f, const ComplexPoint& p, double step, bool force_fd) {
  require_step(step);
  const std::size_t n = p.dim();
  if (n < 2) throw Error("strong_pseudoconvexity_check: complex tangent space needs dimension >= 2");
  const std::vector<cplx> g = gradient_of(f, p, step, force_fd);
  Eigen::VectorXcd gv(n);
  for (std::size_t j = 0; j < n; ++j) gv(j) = g[j];
  if (gv.norm() < 1e-10) throw Error("strong_pseudoconvexity_check: gradient vanishes at " + to_string(p));
  // Columns 1..n-1 of Q span the complement of g.
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gv);
  const Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd t = q.rightCols(n - 1);
  const LeviMatrix l = levi_of(f, p, step, force_fd);
  return min_eigenvalue(t.adjoint() * l * t);
}

ScalarField lift_h(const ScalarField& u, std::size_t n) {
  if (u.dim() != 2) throw Error("lift_h: u must be defined on C^2");
  if (n < 3) throw Error("lift_h: n must be >= 3");
  auto head = [](const ComplexPoint& z) { return ComplexPoint{z[0], z[1]}; };
  auto value = [u, head](const ComplexPoint& z) {
    double tail = 0.0;
    for (std::size_t j = 2; j < z.dim(); ++j) tail += std::norm(z[j]);
    return u(head(z)) + tail;
  };
  auto gradient = [u, head](const ComplexPoint& z) {
    const ComplexPoint w = head(z);
    const std::vector<cplx> gu = u.has_gradient() ? u.gradient(w) : gradient_fd(u, w, default_step(w));
    std::vector<cplx> g(z.dim());
    g[0] = gu[0];
    g[1] = gu[1];
    for (std::size_t j = 2; j < z.dim(); ++j) g[j] = 2.0 * z[j];
    return g;
  };
  auto levi = [u, head, n](const ComplexPoint& z) {
    const ComplexPoint w = head(z);
    LeviMatrix l = LeviMatrix::Identity(n, n);
    l.topLeftCorner(2, 2) = u.has_levi() ? u.levi(w) : levi_matrix_fd(u, w, default_step(w));
    return l;
  };
  return ScalarField(n, value, gradient, levi, "lift(" + u.label() + ")");
}

bool UCandidateReport::accepted() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const GridCheck& c) { return c.passed; });
}

const GridCheck& UCandidateReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error("UCandidateReport: no check named " + name);
}

std::vector<std::string> UCandidateReport::failed() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

UCandidateReport verify_u_candidate(const ScalarField& u, const SibonyLadder& ladder, const GridSpec& spec) {
  if (u.dim() != 2) throw Error("verify_u_candidate: u must be defined on C^2");
  if (!(spec.exclusion_radius > 0.0 && spec.exclusion_radius < spec.outer_radius && spec.outer_radius < 3.0)) {
    throw Error("verify_u_candidate: need 0 < exclusion radius < outer radius < 3");
  }
  if (spec.shells == 0 || spec.directions == 0 || spec.sphere_shells == 0 || spec.sphere_directions == 0) {
    throw Error("verify_u_candidate: empty grid");
  }

  std::vector<ComplexPoint> dirs = {ComplexPoint{1.0, 0.0}, ComplexPoint{0.0, 1.0}};
  CounterRng rng(spec.seed, stream_id("psh-grid"));
  while (dirs.size() < spec.directions) dirs.push_back(rng.sphere_point(2));

  struct ShellResult {
    double levi = std::numeric_limits<double>::infinity();
    ComplexPoint levi_at{0.0, 0.0};
    double grad = std::numeric_limits<double>::infinity();
    ComplexPoint grad_at{0.0, 0.0};
    double umin = std::numeric_limits<double>::infinity();
  };
  // Log-spaced annular shells between the exclusion radius and the outer radius.
  const double lr0 = std::log(spec.exclusion_radius * 2.0);
  const double lr1 = std::log(spec.outer_radius);
  const auto shells = parallel_map(spec.shells, [&](std::size_t i) {
    const double t = spec.shells == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(spec.shells - 1);
    const double r = std::exp(lr0 + t * (lr1 - lr0));
    ShellResult res;
    for (const auto& d : dirs) {
      const ComplexPoint z = r * d;
      const double h = pick_step(spec, z);
      const double lv = levi_min_eigenvalue(u, z, h, spec.force_fd).min_eigenvalue;
      const double gn = gradient_nonvanishing(u, z, h, spec.force_fd);
      if (lv < res.levi) res.levi = lv, res.levi_at = z;
      if (gn < res.grad) res.grad = gn, res.grad_at = z;
      res.umin = std::min(res.umin, u(z));
    }
    return res;
  });
  ShellResult grid;
  for (const auto& s : shells) {
    if (s.levi < grid.levi) grid.levi = s.levi, grid.levi_at = s.levi_at;
    if (s.grad < grid.grad) grid.grad = s.grad, grid.grad_at = s.grad_at;
    grid.umin = std::min(grid.umin, s.umin);
  }
  const std::size_t grid_samples = spec.shells * dirs.size();

  UCandidateReport report;
  report.checks.push_back({"psh_margin", grid.levi > spec.levi_tolerance, grid.levi, spec.levi_tolerance,
                           grid_samples, "min Levi eigenvalue at " + to_string(grid.levi_at)});
  report.checks.push_back({"gradient", grid.grad > spec.gradient_tolerance, grid.grad, spec.gradient_tolerance,
                           grid_samples, "min gradient norm at " + to_string(grid.grad_at)});

  const double u0 = u(ComplexPoint{0.0, 0.0});
  report.checks.push_back({"value_at_origin", std::abs(u0 - 1.0) <= spec.origin_tolerance, u0, spec.origin_tolerance,
                           1, "expected u(0) = 1"});

  // X: phi_nu on a polar grid of the closed unit disc, plus the exact ladder points.
  const std::size_t segs = std::min(spec.x_segments, ladder.depth());
  const auto seg_max = parallel_map(segs, [&](std::size_t i) {
    const std::size_t nu = i + 1;
    const AnalyticDisc disc = ladder.disc(nu);
    std::pair<double, ComplexPoint> best{-std::numeric_limits<double>::infinity(), ComplexPoint{0.0, 0.0}};
    auto visit = [&](const ComplexPoint& z) {
      const double v = u(z);
      if (v > best.first) best = {v, z};
    };
    for (std::size_t ir = 0; ir <= spec.x_radial; ++ir) {
      const double r = spec.x_radial == 0 ? 0.0 : static_cast<double>(ir) / static_cast<double>(spec.x_radial);
      const std::size_t na = ir == 0 ? 1 : spec.x_angular;
      for (std::size_t ia = 0; ia < na; ++ia) {
        visit(disc(std::polar(r, 2.0 * M_PI * static_cast<double>(ia) / static_cast<double>(na))));
      }
    }
    return best;
  });
  std::pair<double, ComplexPoint> xmax{-std::numeric_limits<double>::infinity(), ComplexPoint{0.0, 0.0}};
  std::size_t x_samples = 0;
  for (const auto& s : seg_max)
    if (s.first > xmax.first) xmax = s;
  x_samples += segs * (1 + spec.x_radial * spec.x_angular);
  for (std::size_t nu = 1; nu <= ladder.depth(); ++nu) {
    const ComplexPoint x = ladder.point(nu).to_point();
    const double v = u(x);
    if (v > xmax.first) xmax = {v, x};
    ++x_samples;
  }
  report.checks.push_back({"max_on_X", xmax.first < 1.0, xmax.first, 1.0, x_samples,
                           "max of u on sampled X at " + to_string(xmax.second)});

  double sphere_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.sphere_shells; ++i) {
    const double t = spec.sphere_shells == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(spec.sphere_shells - 1);
    const double r = spec.sphere_inner + t * (spec.sphere_outer - spec.sphere_inner);
    CounterRng srng(spec.seed, stream_id("psh-sphere", i));
    for (std::size_t k = 0; k < spec.sphere_directions; ++k) {
      const double v = u(r * srng.sphere_point(2));
      sphere_min = std::min(sphere_min, v);
      grid.umin = std::min(grid.umin, v);
    }
  }
  report.checks.push_back({"properness_proxy", sphere_min > xmax.first, sphere_min - xmax.first, 0.0,
                           spec.sphere_shells * spec.sphere_directions,
                           "min of u near |z| = 3 minus max of u on X"});
  report.u_min_estimate = std::min({grid.umin, u0, xmax.first});
  return report;
}

ScalarField sibony_experimental_candidate(const SibonyLadder& ladder, const ExperimentalCandidateParams& params) {
  if (params.terms == 0 || !(params.eps > 0.0 && params.eps < 1.0) || params.mu < 0.0 || params.eta < 0.0) {
    throw Error("sibony_experimental_candidate: invalid parameters");
  }
  struct Term {
    double weight, s, t, c;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  double w = 1.0;
  for (std::size_t nu = 1; nu <= params.terms; ++nu) {
    w *= params.eps;
    const double s = to_double(ladder.slope(nu));
    const double t = to_double(ladder.intercept(nu));
    const double damp = t * std::exp(-(params.d0 + params.d1 * static_cast<double>(nu)));
    terms->push_back({w, s, t, damp * damp});
  }
  const double mu = params.mu;
  const double eta = params.eta;
  // f_nu = z2 - s z1 - t; alpha = (-s, 1).
  auto value = [terms, mu, eta](const ComplexPoint& z) {
    double v = 1.0;
    for (const auto& k : *terms) {
      const double f2 = std::norm(z[1] - k.s * z[0] - k.t);
      v += k.weight * 0.5 * (std::log(f2 + k.c) - std::log(k.t * k.t + k.c));
    }
    const double r2 = z.norm2();
    return v + mu * r2 - eta * std::log1p(-r2 / 9.0);
  };
  auto gradient = [terms, mu, eta](const ComplexPoint& z) {
    std::vector<cplx> g(2, 0.0);
    for (const auto& k : *terms) {
      const cplx f = z[1] - k.s * z[0] - k.t;
      const cplx q = k.weight * f / (std::norm(f) + k.c);
      g[0] += -k.s * q;
      g[1] += q;
    }
    const double den = 9.0 - z.norm2();
    for (std::size_t j = 0; j < 2; ++j) g[j] += 2.0 * mu * z[j] + 2.0 * eta * z[j] / den;
    return g;
  };
  auto levi = [terms, mu, eta](const ComplexPoint& z) {
    LeviMatrix l = LeviMatrix::Zero(2, 2);
    for (const auto& k : *terms) {
      const double den = std::norm(z[1] - k.s * z[0] - k.t) + k.c;
      const double coef = 0.5 * k.weight * k.c / (den * den);
      const cplx alpha[2] = {-k.s, 1.0};
      for (int j = 0; j < 2; ++j)
        for (int m = 0; m < 2; ++m) l(j, m) += coef * std::conj(alpha[j]) * alpha[m];
    }
    const double den = 9.0 - z.norm2();
    for (int j = 0; j < 2; ++j) {
      for (int m = 0; m < 2; ++m) {
        l(j, m) += eta * z[j] * std::conj(z[m]) / (den * den);
      }
      l(j, j) += mu + eta / den;
    }
    return l;
  };
  return ScalarField(2, value, gradient, levi, "sibony-experimental");
}

DomainPtr candidate_domain(const ScalarField& u, std::size_t n, const SibonyLadder& ladder, double u_min_estimate) {
  if (u.dim() != 2) throw Error("candidate_domain: u must be defined on C^2");
  if (n < 2) throw Error("candidate_domain: n must be >= 2");
  auto disc3 = std::make_shared<BallDomain>(ComplexPoint(2), 3.0);
  SublevelOptions opts;
  for (std::size_t nu = 2; nu <= ladder.depth(); ++nu) opts.anchors.push_back(slice_embed(ladder.point(nu).to_point(), n));
  const ComplexPoint seed = slice_embed(ladder.point(1).to_point(), n);
  if (n == 2) return std::make_shared<SublevelDomain>(u, 1.0, disc3, seed, opts);
  const double tail = std::sqrt(std::max(1.0 - u_min_estimate, 1e-6)) * 1.05 + 1e-3;
  auto tail_ball = std::make_shared<BallDomain>(ComplexPoint(n - 2), tail);
  auto ambient = std::make_shared<ProductDomain>(std::vector<DomainPtr>{disc3, tail_ball});
  return std::make_shared<SublevelDomain>(lift_h(u, n), 1.0, ambient, seed, opts);
}

}  // namespace kobalab
