#include "kobalab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>

#include "kobalab/parallel.hpp"
#include "kobalab/random.hpp"

namespace kobalab {

namespace {

// ---- schema ---------------------------------------------------------------

enum class Kind {
  integer,       // >= min
  positive,      // > 0
  nonnegative,   // >= 0
  unit_open,     // in (0, 1)
  at_least_one,  // >= 1
  point,
  point_or_null,
  positive_or_null,
  string_or_null,
  domain,
  field,
  field_or_null,
  grid,
  domain_names,
};

struct Key {
  const char* name;
  Kind kind;
  Json fallback;
  long long min = 0;
};

Json unit_ball_spec(int n) { return {{"type", "ball"}, {"dim", n}}; }

const std::map<std::string, std::vector<Key>>& schema() {
  static const std::map<std::string, std::vector<Key>> s = {
      {"verify-ladder",
       {{"N", Kind::integer, 40, 2},
        {"a_base", Kind::integer, 4, 2},
        {"b_base", Kind::integer, 2, 2},
        {"ratio_floor", Kind::unit_open, 0.51}}},
      {"cauchy-demo",
       {{"N", Kind::integer, 40, 3},
        {"margin", Kind::unit_open, 1e-3},
        {"ratio_floor", Kind::unit_open, 0.51},
        {"nu_max", Kind::integer, 30, 1},
        {"domain", Kind::domain, {{"type", "polydisc"}, {"dim", 2}}},
        {"candidate", Kind::field_or_null, nullptr},
        {"n", Kind::integer, 2, 2},
        {"grid", Kind::grid, Json::object()}}},
      {"slice-check",
       {{"g_domain", Kind::domain, unit_ball_spec(1)},
        {"omega_domain", Kind::domain, {{"type", "polydisc"}, {"dim", 2}}},
        {"z", Kind::point_or_null, nullptr},
        {"w", Kind::point_or_null, nullptr},
        {"pairs", Kind::integer, 20, 1},
        {"pair_radius", Kind::unit_open, 0.8},
        {"budget", Kind::integer, 10000, 0},
        {"restarts", Kind::integer, 16, 1},
        {"max_links", Kind::integer, 4, 1},
        {"margin", Kind::unit_open, 1e-3},
        {"tolerance", Kind::positive, 1e-9},
        {"sandwich_samples", Kind::integer, 256, 0}}},
      {"psh-verify",
       {{"candidate", Kind::field, {{"type", "sibony-experimental"}}},
        {"N", Kind::integer, 40, 2},
        {"grid", Kind::grid, Json::object()}}},
      {"visibility-demo",
       {{"domain", Kind::domain, unit_ball_spec(2)},
        {"p", Kind::point, Json::array({1.0, 0.0})},
        {"q", Kind::point, Json::array({-1.0, 0.0})},
        {"r_nbhd", Kind::positive, 0.05},
        {"pool_radius", Kind::positive_or_null, nullptr},
        {"lambda", Kind::at_least_one, 1.0},
        {"kappa", Kind::nonnegative, 0.2},
        {"n_curves", Kind::integer, 50, 1},
        {"boundary_floor", Kind::positive, 1e-2},
        {"samples_per_disc", Kind::integer, 64, 2},
        {"pair_samples", Kind::integer, 12, 1},
        {"velocity_samples", Kind::integer, 8, 0},
        {"budget", Kind::integer, 4000, 0},
        {"margin", Kind::unit_open, 1e-3},
        {"min_passing", Kind::integer, 1, 0},
        {"min_epsilon", Kind::nonnegative, 0.0}}},
      {"ball-calibration",
       {{"domains", Kind::domain_names, Json::array({"disc", "ball", "bidisc"})},
        {"pairs", Kind::integer, 100, 1},
        {"pair_radius", Kind::unit_open, 0.9},
        {"budget", Kind::integer, 10000, 0},
        {"margin", Kind::unit_open, 1e-3},
        {"metric_tolerance", Kind::positive, 1e-6}}},
  };
  return s;
}

// Keys shared by every experiment.
const std::vector<Key>& common_keys() {
  static const std::vector<Key> k = {{"seed", Kind::integer, 0, 0}, {"out", Kind::string_or_null, nullptr}};
  return k;
}

const char* kGridKeys[] = {"exclusion_radius", "outer_radius",      "shells",           "directions",
                           "x_segments",       "x_radial",          "x_angular",        "sphere_inner",
                           "sphere_outer",     "sphere_shells",     "sphere_directions", "origin_tolerance",
                           "gradient_tolerance", "levi_tolerance",  "step",             "force_fd"};

double real_value(const Json& v, const std::string& path) {
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw SpecError(path, "expected a number");
  return v.get<double>();
}

Json validate(const Key& key, const Json& v) {
  const std::string path = key.name;
  switch (key.kind) {
    case Kind::integer:
      if (!v.is_number_integer() || v.get<long long>() < key.min) {
        throw SpecError(path, "expected an integer >= " + std::to_string(key.min));
      }
      return v.get<long long>();
    case Kind::positive:
      if (!(real_value(v, path) > 0.0)) throw SpecError(path, "expected a positive number");
      return v.get<double>();
    case Kind::nonnegative:
      if (!(real_value(v, path) >= 0.0)) throw SpecError(path, "expected a non-negative number");
      return v.get<double>();
    case Kind::unit_open: {
      const double x = real_value(v, path);
      if (!(x > 0.0 && x < 1.0)) throw SpecError(path, "expected a number in (0, 1)");
      return x;
    }
    case Kind::at_least_one:
      if (!(real_value(v, path) >= 1.0)) throw SpecError(path, "expected a number >= 1");
      return v.get<double>();
    case Kind::point_or_null:
      if (v.is_null()) return v;
      [[fallthrough]];
    case Kind::point:
      return to_json(point_from_json(v, path));
    case Kind::positive_or_null:
      if (v.is_null()) return v;
      if (!(real_value(v, path) > 0.0)) throw SpecError(path, "expected a positive number or null");
      return v.get<double>();
    case Kind::string_or_null:
      if (!v.is_null() && !v.is_string()) throw SpecError(path, "expected a string or null");
      return v;
    case Kind::domain:
      domain_from_json(v, path);
      return v;
    case Kind::field_or_null:
      if (v.is_null()) return v;
      [[fallthrough]];
    case Kind::field:
      if (field_from_json(v, path).dim() != 2) throw SpecError(path, "expected a field on C^2");
      return v;
    case Kind::grid:
      if (!v.is_object()) throw SpecError(path, "expected an object");
      for (const auto& [k, x] : v.items()) {
        bool known = false;
        for (const char* g : kGridKeys) known = known || k == g;
        if (!known) throw SpecError(path + "." + k, "unknown key");
        if (k == "force_fd" ? !x.is_boolean() : !x.is_number()) throw SpecError(path + "." + k, "wrong type");
      }
      return v;
    case Kind::domain_names:
      if (!v.is_array() || v.empty()) throw SpecError(path, "expected a non-empty array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string s = v[i].is_string() ? v[i].get<std::string>() : "";
        if (s != "disc" && s != "ball" && s != "bidisc") {
          throw SpecError(path + "[" + std::to_string(i) + "]", "expected one of disc, ball, bidisc");
        }
      }
      return v;
  }
  return v;
}

// ---- helpers --------------------------------------------------------------

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Human-readable numbers in check details; tables keep full precision.
std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::size_t get_size(const ExperimentConfig& c, const char* key) { return c[key].get<std::size_t>(); }
double get_real(const ExperimentConfig& c, const char* key) { return c[key].get<double>(); }

double upper_or_inf(const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::infinity()); }

// ---- verify-ladder --------------------------------------------------------

void run_verify_ladder(const ExperimentConfig& c, RunReport& rep) {
  const SibonyLadder ladder(get_size(c, "N"), c["a_base"].get<unsigned>(), c["b_base"].get<unsigned>());
  const LadderReport lr = verify_ladder(ladder);
  for (const auto& chk : lr.checks) {
    std::string detail = chk.description;
    if (!chk.passed && !chk.witnesses.empty()) detail += "; " + chk.witnesses.front();
    rep.checks.push_back({chk.item, chk.passed ? Status::pass : Status::fail, detail});
  }
  rep.results["ladder"] = to_json(lr);
  const ChainTermTable t = chain_table(ladder, get_real(c, "ratio_floor"));
  Table tab{"chain_table", {"nu", "a_nu", "b_nu", "term", "partial_sum", "tail_bound"}, {}, {"nu", "term", "partial_sum", "tail_bound"}};
  for (const auto& r : t.rows) {
    tab.rows.push_back({static_cast<std::int64_t>(r.nu), r.a, r.b, r.term, r.partial_sum, r.tail_bound});
  }
  rep.tables.push_back(std::move(tab));
  rep.results["chain_table"] = {{"ratio", t.ratio},
                                {"observed_ratio", t.observed_ratio},
                                {"window", {t.window_begin, t.window_end}}};
}

// ---- cauchy-demo ----------------------------------------------------------

GridSpec grid_spec(const ExperimentConfig& c) {
  GridSpec g;
  g.seed = c["seed"].get<std::uint64_t>();
  const Json& o = c["grid"];
  auto real = [&](const char* k, double& dst) {
    if (o.contains(k)) dst = o[k].get<double>();
  };
  auto size = [&](const char* k, std::size_t& dst) {
    if (!o.contains(k)) return;
    const double v = o[k].get<double>();
    if (!(v >= 1.0) || v != std::floor(v)) throw SpecError(std::string("grid.") + k, "expected a positive integer");
    dst = static_cast<std::size_t>(v);
  };
  real("exclusion_radius", g.exclusion_radius);
  real("outer_radius", g.outer_radius);
  size("shells", g.shells);
  size("directions", g.directions);
  size("x_segments", g.x_segments);
  size("x_radial", g.x_radial);
  size("x_angular", g.x_angular);
  real("sphere_inner", g.sphere_inner);
  real("sphere_outer", g.sphere_outer);
  size("sphere_shells", g.sphere_shells);
  size("sphere_directions", g.sphere_directions);
  real("origin_tolerance", g.origin_tolerance);
  real("gradient_tolerance", g.gradient_tolerance);
  real("levi_tolerance", g.levi_tolerance);
  real("step", g.step);
  if (o.contains("force_fd")) g.force_fd = o["force_fd"].get<bool>();
  return g;
}

void add_candidate_checks(const UCandidateReport& ur, RunReport& rep) {
  Table tab{"psh_checks", {"check", "passed", "value", "tolerance", "samples"}, {}, {"check", "value"}};
  for (const auto& g : ur.checks) {
    rep.checks.push_back({g.name, g.passed ? Status::pass : Status::fail, g.detail});
    tab.rows.push_back({g.name, static_cast<std::int64_t>(g.passed), g.value, g.tolerance, static_cast<std::int64_t>(g.samples)});
  }
  rep.tables.push_back(std::move(tab));
  rep.results["candidate"] = to_json(ur);
}

void run_cauchy_demo(const ExperimentConfig& c, RunReport& rep) {
  const SibonyLadder ladder(get_size(c, "N"));
  const double margin = get_real(c, "margin");
  DomainPtr omega;
  if (!c["candidate"].is_null()) {
    const ScalarField u = field_from_json(c["candidate"], "candidate");
    const UCandidateReport ur = verify_u_candidate(u, ladder, grid_spec(c));
    std::string names;
    for (const auto& f : ur.failed()) names += (names.empty() ? "" : ", ") + f;
    rep.checks.push_back({"candidate", ur.accepted() ? Status::pass : Status::fail,
                          ur.accepted() ? "accepted" : "rejected by " + names});
    rep.results["candidate"] = to_json(ur);
    if (!ur.accepted()) return;
    omega = candidate_domain(u, get_size(c, "n"), ladder, ur.u_min_estimate);
  } else {
    omega = domain_from_json(c["domain"], "domain");
  }
  const CauchyTable ct = cauchy_table(*omega, ladder, margin, get_real(c, "ratio_floor"));
  const ChainTermTable terms = chain_table(ladder);
  const std::size_t nu_max = get_size(c, "nu_max");

  Table tab{"cauchy_table", {"nu", "U", "term", "T", "norm"}, {}, {"nu", "U", "T", "norm"}};
  std::string upper_bad;
  bool tail_ok = true;
  bool norm_ok = true;
  for (std::size_t i = 0; i < ct.rows.size(); ++i) {
    const auto& r = ct.rows[i];
    const double term = terms.rows.at(r.nu - 1).term;
    tab.rows.push_back({static_cast<std::int64_t>(r.nu), r.upper, term, r.tail, r.norm});
    if (r.nu <= nu_max && !(r.upper <= term * (1.0 + 2.0 * margin)) && upper_bad.empty()) {
      upper_bad = "nu=" + std::to_string(r.nu) + ": U=" + brief(r.upper) + " > term*(1+2 margin)=" +
                  brief(term * (1.0 + 2.0 * margin));
    }
    if (i > 0) {
      tail_ok = tail_ok && r.tail < ct.rows[i - 1].tail;
      norm_ok = norm_ok && r.norm < ct.rows[i - 1].norm;
    }
  }
  if (ct.rows.empty()) throw Error("cauchy-demo: empty table");
  tail_ok = tail_ok && ct.rows.back().tail <= 1e-3 * ct.rows.front().tail;
  norm_ok = norm_ok && ct.rows.back().norm <= 1e-3 * ct.rows.front().norm;
  rep.checks.push_back({"upper", upper_bad.empty() ? Status::pass : Status::fail,
                        upper_bad.empty() ? "U(nu) <= term(nu)(1 + 2 margin) for nu <= " + std::to_string(nu_max) : upper_bad});
  rep.checks.push_back({"tail", tail_ok ? Status::pass : Status::fail, "T(nu) strictly decreasing toward 0, T(last) = " + brief(ct.rows.back().tail)});
  rep.checks.push_back({"escape", norm_ok ? Status::pass : Status::fail, "|x_nu| strictly decreasing toward 0, last = " + brief(ct.rows.back().norm)});
  rep.tables.push_back(std::move(tab));
  rep.results["cauchy"] = {{"ratio", ct.ratio}, {"observed_ratio", ct.observed_ratio}, {"margin", ct.margin},
                           {"domain", omega->kind()}, {"dimension", omega->dimension()}};
}

// ---- slice-check ----------------------------------------------------------

ComplexPoint sample_in(const DomainOracle& d, double radius_fraction, CounterRng& rng) {
  const EnclosingBall b = d.enclosing_ball();
  for (int tries = 0; tries < 100000; ++tries) {
    const ComplexPoint z = b.center + rng.ball_point(d.dimension(), radius_fraction * b.radius);
    if (d.contains(z)) return z;
  }
  throw Error("could not sample a point of the domain");
}

void run_slice_check(const ExperimentConfig& c, RunReport& rep) {
  const DomainPtr g = domain_from_json(c["g_domain"], "g_domain");
  const DomainPtr omega = domain_from_json(c["omega_domain"], "omega_domain");
  if (omega->dimension() <= g->dimension()) throw SpecError("omega_domain", "dimension must exceed that of g_domain");
  const std::uint64_t seed = c["seed"].get<std::uint64_t>();
  std::vector<std::pair<ComplexPoint, ComplexPoint>> pairs;
  if (c["z"].is_null() != c["w"].is_null()) throw SpecError(c["z"].is_null() ? "z" : "w", "give both z and w, or neither");
  if (!c["z"].is_null()) {
    const ComplexPoint z = point_from_json(c["z"], "z", g->dimension());
    const ComplexPoint w = point_from_json(c["w"], "w", g->dimension());
    if (!g->contains(z)) throw SpecError("z", "point is not in g_domain");
    if (!g->contains(w)) throw SpecError("w", "point is not in g_domain");
    pairs.emplace_back(z, w);
  } else {
    for (std::size_t i = 0; i < get_size(c, "pairs"); ++i) {
      CounterRng rng(seed, stream_id("slice-pairs", i));
      ComplexPoint z = sample_in(*g, get_real(c, "pair_radius"), rng);
      ComplexPoint w = sample_in(*g, get_real(c, "pair_radius"), rng);
      pairs.emplace_back(std::move(z), std::move(w));
    }
  }
  Table tab{"slice_check", {"pair", "g_lower", "g_upper", "omega_lower", "omega_upper", "status"}, {}, {"pair", "omega_lower", "omega_upper"}};
  Json rows = Json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    SliceOptions o;
    o.search.budget = get_size(c, "budget");
    o.search.restarts = get_size(c, "restarts");
    o.search.max_links = get_size(c, "max_links");
    o.search.margin = get_real(c, "margin");
    o.search.seed = seed ^ stream_id("slice-search", i);
    o.tolerance = get_real(c, "tolerance");
    o.sandwich_samples = get_size(c, "sandwich_samples");
    o.seed = seed ^ stream_id("slice-sandwich", i);
    const SliceReport r = slice_identity_check(*g, *omega, pairs[i].first, pairs[i].second, o);
    Status s = Status::pass;
    std::string detail = "brackets overlap and transfer";
    if (!r.overlap) {
      s = Status::fail;
      detail = "brackets are disjoint";
    } else if (!r.passed) {
      s = Status::indeterminate;
      detail = !r.g.upper || !r.omega.upper ? "no upper bound within budget" : "brackets overlap, transfer not within tolerance";
    }
    const std::string name = "pair-" + std::to_string(i);
    rep.checks.push_back({name, s, detail});
    tab.rows.push_back({static_cast<std::int64_t>(i), r.g.lower, upper_or_inf(r.g.upper), r.omega.lower,
                        upper_or_inf(r.omega.upper), std::string(to_string(s))});
    Json row = to_json(r);
    row["z"] = to_json(pairs[i].first);
    row["w"] = to_json(pairs[i].second);
    rows.push_back(std::move(row));
  }
  rep.tables.push_back(std::move(tab));
  rep.results["pairs"] = std::move(rows);
}

// ---- psh-verify -----------------------------------------------------------

void run_psh_verify(const ExperimentConfig& c, RunReport& rep) {
  const ScalarField u = field_from_json(c["candidate"], "candidate");
  add_candidate_checks(verify_u_candidate(u, SibonyLadder(get_size(c, "N")), grid_spec(c)), rep);
}

// ---- visibility-demo ------------------------------------------------------

void run_visibility(const ExperimentConfig& c, RunReport& rep) {
  const DomainPtr d = domain_from_json(c["domain"], "domain");
  const ComplexPoint p = point_from_json(c["p"], "p", d->dimension());
  const ComplexPoint q = point_from_json(c["q"], "q", d->dimension());
  VisibilityOptions o;
  o.r_nbhd = get_real(c, "r_nbhd");
  if (!c["pool_radius"].is_null()) o.pool_radius = get_real(c, "pool_radius");
  if (o.pool_radius && *o.pool_radius < o.r_nbhd) throw SpecError("pool_radius", "must be >= r_nbhd");
  if (!(distance(p, q) > 2.0 * o.r_nbhd)) throw SpecError("r_nbhd", "neighborhoods of p and q must be disjoint");
  o.lambda = get_real(c, "lambda");
  o.kappa = get_real(c, "kappa");
  o.n_curves = get_size(c, "n_curves");
  o.seed = c["seed"].get<std::uint64_t>();
  o.boundary_floor = get_real(c, "boundary_floor");
  o.samples_per_disc = get_size(c, "samples_per_disc");
  o.margin = get_real(c, "margin");
  o.check.pair_samples = get_size(c, "pair_samples");
  o.check.velocity_samples = get_size(c, "velocity_samples");
  o.check.search.budget = get_size(c, "budget");
  o.check.search.margin = o.margin;
  const VisibilityReport vr = visibility_experiment(*d, p, q, o);

  Table all{"visibility_curves", {"curve", "tested", "chain_found", "verdict", "length", "max_delta"}, {}, {}};
  Table passing{"visibility", {"curve", "max_delta"}, {}, {"curve", "max_delta"}};
  Json curves = Json::array();
  for (const auto& cv : vr.curves) {
    const auto idx = static_cast<std::int64_t>(cv.index);
    all.rows.push_back({idx, static_cast<std::int64_t>(cv.tested), static_cast<std::int64_t>(cv.chain_found),
                        std::string(to_string(cv.verdict)), cv.length, cv.max_delta});
    if (cv.tested && cv.verdict == Verdict::pass) {
      passing.rows.push_back({idx, cv.max_delta});
      Json cj = to_json(*cv.curve);
      cj["curve"] = cv.index;
      curves.push_back(std::move(cj));
    }
  }
  rep.tables.push_back(std::move(all));
  rep.tables.push_back(std::move(passing));
  rep.documents["curves.json"] = {{"curves", std::move(curves)}};
  rep.results["visibility"] = to_json(vr);

  const std::size_t min_passing = get_size(c, "min_passing");
  const double min_eps = get_real(c, "min_epsilon");
  rep.checks.push_back({"passing-curves", vr.passing >= min_passing ? Status::pass : Status::indeterminate,
                        std::to_string(vr.passing) + " of " + std::to_string(vr.tested) + " tested curves pass"});
  const bool eps_ok = vr.epsilon_star && *vr.epsilon_star > 0.0 && *vr.epsilon_star >= min_eps;
  rep.checks.push_back({"epsilon-star", eps_ok ? Status::pass : Status::indeterminate,
                        vr.epsilon_star ? "epsilon_star = " + brief(*vr.epsilon_star) : "no passing curve"});
}

// ---- ball-calibration -----------------------------------------------------

// Independent closed forms in extended precision.
using ld = long double;
using lcplx = std::complex<ld>;

double disc_oracle(cplx z, cplx w) {
  const lcplx a(z.real(), z.imag());
  const lcplx b(w.real(), w.imag());
  return static_cast<double>(std::atanh(std::abs((a - b) / (1.0L - std::conj(b) * a))));
}

// |phi_w(z)| with phi_w the ball automorphism exchanging w and 0.
double ball_oracle(const ComplexPoint& z, const ComplexPoint& w) {
  const std::size_t n = z.dim();
  std::vector<lcplx> a(n), x(n);
  ld aa = 0.0L;
  lcplx za = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = {w[j].real(), w[j].imag()};
    x[j] = {z[j].real(), z[j].imag()};
    aa += std::norm(a[j]);
    za += x[j] * std::conj(a[j]);
  }
  if (aa == 0.0L) {
    ld r = 0.0L;
    for (const auto& v : x) r += std::norm(v);
    return static_cast<double>(std::atanh(std::sqrt(r)));
  }
  const ld s = std::sqrt(1.0L - aa);
  ld num = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const lcplx pz = (za / aa) * a[j];
    num += std::norm(a[j] - pz - s * (x[j] - pz));
  }
  return static_cast<double>(std::atanh(std::sqrt(num) / std::abs(1.0L - za)));
}

double polydisc_oracle(const ComplexPoint& z, const ComplexPoint& w) {
  double m = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j) m = std::max(m, disc_oracle(z[j], w[j]));
  return m;
}

void run_calibration(const ExperimentConfig& c, RunReport& rep) {
  const std::uint64_t seed = c["seed"].get<std::uint64_t>();
  const double radius = get_real(c, "pair_radius");
  const double tol = get_real(c, "metric_tolerance");
  Table tab{"calibration", {"domain", "pair", "oracle", "lower", "upper", "inside"}, {}, {"oracle", "lower", "upper"}};
  Table metric{"calibration_metric", {"domain", "direction", "lower", "upper"}, {}, {}};
  for (const auto& nj : c["domains"]) {
    const std::string name = nj.get<std::string>();
    const bool poly = name == "bidisc";
    const std::size_t n = name == "disc" ? 1 : 2;
    const DomainPtr d = poly ? unit_polydisc(n) : unit_ball(n);
    struct Row {
      double oracle;
      DistanceEstimate e;
    };
    const auto rows = parallel_map(get_size(c, "pairs"), [&](std::size_t i) {
      CounterRng rng(seed, stream_id("calibration-" + name, i));
      ComplexPoint z, w;
      if (poly) {
        std::vector<cplx> a(n), b(n);
        for (auto& x : a) x = rng.disc_point(radius);
        for (auto& x : b) x = rng.disc_point(radius);
        z = ComplexPoint(a);
        w = ComplexPoint(b);
      } else {
        z = rng.ball_point(n, radius);
        w = rng.ball_point(n, radius);
      }
      SearchOptions so;
      so.budget = get_size(c, "budget");
      so.margin = get_real(c, "margin");
      so.seed = seed ^ stream_id("calibration-search-" + name, i);
      return Row{poly ? polydisc_oracle(z, w) : ball_oracle(z, w), estimate_distance(*d, z, w, so)};
    });
    std::size_t violations = 0, missing = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      // Oracle rounding is far below 1e-13 relative.
      const double slack = 1e-13 * r.oracle + 1e-16;
      const bool lower_ok = r.e.lower <= r.oracle + slack;
      const bool upper_ok = !r.e.upper || *r.e.upper >= r.oracle - slack;
      violations += !(lower_ok && upper_ok);
      missing += !r.e.upper;
      tab.rows.push_back({name, static_cast<std::int64_t>(i), r.oracle, r.e.lower, upper_or_inf(r.e.upper),
                          static_cast<std::int64_t>(lower_ok && upper_ok && r.e.upper)});
    }
    const Status bs = violations ? Status::fail : missing ? Status::indeterminate : Status::pass;
    rep.checks.push_back({name + "-brackets", bs,
                          std::to_string(violations) + " violations, " + std::to_string(missing) + " missing upper bounds in " +
                              std::to_string(rows.size()) + " pairs"});

    std::vector<cplx> e1(n);
    e1[0] = 1.0;
    std::vector<ComplexPoint> dirs{ComplexPoint(e1)};
    if (!poly) {
      CounterRng rng(seed, stream_id("calibration-direction-" + name));
      dirs.push_back(rng.sphere_point(n));
    }
    Status ms = Status::pass;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const MetricEstimate me = infinitesimal_bounds(*d, ComplexPoint(n), dirs[k]);
      metric.rows.push_back({name, static_cast<std::int64_t>(k), me.lower, me.upper});
      if (me.lower > 1.0 + 1e-12 || me.upper < 1.0 - 1e-12) {
        ms = Status::fail;
      } else if (std::abs(me.lower - 1.0) > tol || std::abs(me.upper - 1.0) > tol) {
        ms = ms == Status::fail ? ms : Status::indeterminate;
      }
    }
    rep.checks.push_back({name + "-metric", ms, "k(0; v) = 1 for unit v within " + brief(tol)});
  }
  rep.tables.push_back(std::move(tab));
  rep.tables.push_back(std::move(metric));
}

using Runner = void (*)(const ExperimentConfig&, RunReport&);

Runner runner(const std::string& name) {
  static const std::map<std::string, Runner> m = {
      {"verify-ladder", run_verify_ladder}, {"cauchy-demo", run_cauchy_demo},  {"slice-check", run_slice_check},
      {"psh-verify", run_psh_verify},       {"visibility-demo", run_visibility}, {"ball-calibration", run_calibration},
  };
  return m.at(name);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f.flush()) throw Error("write failed for " + path.string());
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"verify-ladder", "cauchy-demo",     "slice-check",
                                                 "psh-verify",    "visibility-demo", "ball-calibration"};
  return names;
}

ExperimentConfig make_config(const Json& doc) {
  if (!doc.is_object()) throw SpecError("", "config must be a JSON object");
  if (!doc.contains("experiment")) throw SpecError("experiment", "missing required key");
  if (!doc["experiment"].is_string() || !schema().count(doc["experiment"].get<std::string>())) {
    std::string list;
    for (const auto& n : experiment_names()) list += (list.empty() ? "" : ", ") + n;
    throw SpecError("experiment", "expected one of " + list);
  }
  ExperimentConfig c;
  c.experiment = doc["experiment"].get<std::string>();
  c.values = Json::object();
  c.values["experiment"] = c.experiment;
  std::vector<Key> keys = common_keys();
  const auto& own = schema().at(c.experiment);
  keys.insert(keys.end(), own.begin(), own.end());
  for (const auto& [k, v] : doc.items()) {
    if (k == "experiment") continue;
    bool known = false;
    for (const auto& key : keys) known = known || k == key.name;
    if (!known) throw SpecError(k, "unknown key for experiment " + c.experiment);
  }
  for (const auto& key : keys) c.values[key.name] = validate(key, doc.contains(key.name) ? doc[key.name] : key.fallback);
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError("", std::string("malformed JSON: ") + e.what());
  }
  return make_config(doc);
}

std::string emit_config(const ExperimentConfig& config) { return config.values.dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : config.values.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::indeterminate: return "indeterminate";
  }
  return "?";
}

std::string Table::csv() const { return csv(columns); }

std::string Table::csv(const std::vector<std::string>& cols) const {
  std::vector<std::size_t> idx;
  for (const auto& c : cols) {
    const auto it = std::find(columns.begin(), columns.end(), c);
    if (it == columns.end()) throw Error("table " + name + " has no column " + c);
    idx.push_back(static_cast<std::size_t>(it - columns.begin()));
  }
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) out += ",";
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out += v;
            } else if constexpr (std::is_same_v<T, double>) {
              out += fmt(v);
            } else {
              out += std::to_string(v);
            }
          },
          row.at(idx[i]));
    }
    out += "\n";
  }
  return out;
}

int RunReport::exit_code() const {
  int code = 0;
  for (const auto& c : checks) {
    if (c.status == Status::fail) return 1;
    if (c.status == Status::indeterminate) code = 2;
  }
  return code;
}

const CheckResult* RunReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const Table* RunReport::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

Json RunReport::to_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks) checks_json.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  Json artifacts = Json::array();
  for (const auto& t : tables) artifacts.push_back(t.name + ".csv");
  for (const auto& [name, doc] : documents) artifacts.push_back(name);
  return {{"tool", "kobalab"},
          {"version", kToolVersion},
          {"experiment", config.experiment},
          {"config", config.values},
          {"config_hash", config_hash(config)},
          {"checks", checks_json},
          {"exit_code", exit_code()},
          {"artifacts", artifacts},
          {"results", results}};
}

RunReport run(const ExperimentConfig& config) {
  RunReport rep;
  rep.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    runner(config.experiment)(config, rep);
  } catch (const SpecError&) {
    throw;
  } catch (const Indeterminate& e) {
    rep.checks.push_back({"run", Status::indeterminate, e.what()});
  } catch (const Error& e) {
    rep.checks.push_back({"run", Status::fail, e.what()});
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<std::string> write_outputs(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(name);
  };
  put("report.json", report.to_json().dump(2) + "\n");
  for (const auto& t : report.tables) put(t.name + ".csv", t.csv());
  for (const auto& [name, doc] : report.documents) put(name, doc.dump() + "\n");
  put("timing.json", Json{{"wall_seconds", report.wall_seconds}}.dump(2) + "\n");
  return written;
}

std::vector<std::string> emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::vector<const Table*> plotted;
  for (const auto& t : report.tables)
    if (!t.plot_columns.empty()) plotted.push_back(&t);
  if (plotted.empty()) throw Error("no tabular artifacts");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::string> written;
  for (const Table* t : plotted) {
    const std::string name = "plot_" + t->name + ".csv";
    write_file(dir / name, t->csv(t->plot_columns));
    written.push_back(name);
  }
  return written;
}

}  // namespace kobalab
