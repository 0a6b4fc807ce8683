#include "kobalab/spec_io.hpp"

#include <cmath>
#include <memory>

#include "kobalab/expression.hpp"

namespace kobalab {

namespace {

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require(const Json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw SpecError(at(path, key), "missing required key");
  return j.at(key);
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw SpecError(at(path, k), "unknown key");
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SpecError(path, "expected a finite number");
  return v;
}

double positive(const Json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw SpecError(path, "expected a positive number");
  return v;
}

std::size_t count(const Json& j, const std::string& path, std::size_t min = 1) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min)) {
    throw SpecError(path, "expected an integer >= " + std::to_string(min));
  }
  return j.get<std::size_t>();
}


// Library constructors report contract violations as Error; attach the path.
template <class Fn>
auto guarded(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
}

Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw SpecError(path, "expected " + std::to_string(n) + " rows");
  Eigen::MatrixXcd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string rp = at(path, r);
    if (!j[r].is_array() || j[r].size() != n) throw SpecError(rp, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = complex_from_json(j[r][c], at(rp, c));
  }
  return m;
}

}  // namespace

cplx complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
  throw SpecError(path, "expected a number or [re, im]");
}

Json to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

ComplexPoint point_from_json(const Json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of coordinates");
  if (dim != 0 && j.size() != dim) throw SpecError(path, "expected " + std::to_string(dim) + " coordinates");
  std::vector<cplx> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(complex_from_json(j[i], at(path, i)));
  return ComplexPoint(std::move(c));
}

Json to_json(const ComplexPoint& z) {
  Json out = Json::array();
  for (std::size_t i = 0; i < z.dim(); ++i) out.push_back(to_json(z[i]));
  return out;
}

ScalarField field_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  const Json& type = require(j, path, "type");
  if (!type.is_string()) throw SpecError(at(path, "type"), "expected a string");
  const std::string t = type.get<std::string>();
  if (t == "norm2") {
    only_keys(j, path, {"type", "dim"});
    return norm2_field(count(require(j, path, "dim"), at(path, "dim")));
  }
  if (t == "quadratic") {
    only_keys(j, path, {"type", "hermitian", "symmetric", "constant"});
    const Json& h = require(j, path, "hermitian");
    if (!h.is_array() || h.empty()) throw SpecError(at(path, "hermitian"), "expected a square matrix");
    const std::size_t n = h.size();
    const Eigen::MatrixXcd a = matrix_from_json(h, at(path, "hermitian"), n);
    const Eigen::MatrixXcd s =
        j.contains("symmetric") ? matrix_from_json(j["symmetric"], at(path, "symmetric"), n) : Eigen::MatrixXcd::Zero(n, n);
    const double c = j.contains("constant") ? number(j["constant"], at(path, "constant")) : 0.0;
    return guarded(path, [&] { return quadratic_field(a, s, c); });
  }
  if (t == "expression") {
    only_keys(j, path, {"type", "dim", "expr"});
    const std::size_t n = count(require(j, path, "dim"), at(path, "dim"));
    const Json& e = require(j, path, "expr");
    if (!e.is_string()) throw SpecError(at(path, "expr"), "expected a string");
    return guarded(at(path, "expr"), [&] { return expression_field(e.get<std::string>(), n); });
  }
  if (t == "lift") {
    only_keys(j, path, {"type", "u", "n"});
    const ScalarField u = field_from_json(require(j, path, "u"), at(path, "u"));
    const std::size_t n = count(require(j, path, "n"), at(path, "n"), 3);
    return guarded(path, [&] { return lift_h(u, n); });
  }
  if (t == "sibony-experimental") {
    only_keys(j, path, {"type", "N", "terms", "eps", "d0", "d1", "mu", "eta"});
    const std::size_t depth = j.contains("N") ? count(j["N"], at(path, "N"), 2) : 40;
    ExperimentalCandidateParams p;
    if (j.contains("terms")) p.terms = count(j["terms"], at(path, "terms"));
    if (j.contains("eps")) p.eps = positive(j["eps"], at(path, "eps"));
    if (j.contains("d0")) p.d0 = positive(j["d0"], at(path, "d0"));
    if (j.contains("d1")) p.d1 = positive(j["d1"], at(path, "d1"));
    if (j.contains("mu")) p.mu = positive(j["mu"], at(path, "mu"));
    if (j.contains("eta")) p.eta = positive(j["eta"], at(path, "eta"));
    return guarded(path, [&] { return sibony_experimental_candidate(SibonyLadder(depth), p); });
  }
  throw SpecError(at(path, "type"), "unknown field type '" + t + "'");
}

DomainPtr domain_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  const Json& type = require(j, path, "type");
  if (!type.is_string()) throw SpecError(at(path, "type"), "expected a string");
  const std::string t = type.get<std::string>();
  if (t == "ball") {
    only_keys(j, path, {"type", "dim", "center", "radius"});
    const std::size_t n = count(require(j, path, "dim"), at(path, "dim"));
    const ComplexPoint c = j.contains("center") ? point_from_json(j["center"], at(path, "center"), n) : ComplexPoint(n);
    const double r = j.contains("radius") ? positive(j["radius"], at(path, "radius")) : 1.0;
    return guarded(path, [&] { return DomainPtr(std::make_shared<BallDomain>(c, r)); });
  }
  if (t == "polydisc") {
    only_keys(j, path, {"type", "dim", "center", "radius", "radii"});
    const std::size_t n = count(require(j, path, "dim"), at(path, "dim"));
    const ComplexPoint c = j.contains("center") ? point_from_json(j["center"], at(path, "center"), n) : ComplexPoint(n);
    if (j.contains("radius") && j.contains("radii")) throw SpecError(at(path, "radii"), "give radius or radii, not both");
    std::vector<double> radii(n, j.contains("radius") ? positive(j["radius"], at(path, "radius")) : 1.0);
    if (j.contains("radii")) {
      const Json& r = j["radii"];
      if (!r.is_array() || r.size() != n) throw SpecError(at(path, "radii"), "expected " + std::to_string(n) + " radii");
      for (std::size_t i = 0; i < n; ++i) radii[i] = positive(r[i], at(at(path, "radii"), i));
    }
    return guarded(path, [&] { return DomainPtr(std::make_shared<PolydiscDomain>(c, radii)); });
  }
  if (t == "product") {
    only_keys(j, path, {"type", "factors"});
    const Json& f = require(j, path, "factors");
    if (!f.is_array() || f.empty()) throw SpecError(at(path, "factors"), "expected a non-empty array");
    std::vector<DomainPtr> factors;
    for (std::size_t i = 0; i < f.size(); ++i) factors.push_back(domain_from_json(f[i], at(at(path, "factors"), i)));
    return guarded(path, [&] { return DomainPtr(std::make_shared<ProductDomain>(factors)); });
  }
  if (t == "sublevel") {
    only_keys(j, path, {"type", "field", "level", "ambient", "seed", "anchors", "lipschitz"});
    ScalarField f = field_from_json(require(j, path, "field"), at(path, "field"));
    const double level = number(require(j, path, "level"), at(path, "level"));
    DomainPtr ambient = domain_from_json(require(j, path, "ambient"), at(path, "ambient"));
    const ComplexPoint seed = point_from_json(require(j, path, "seed"), at(path, "seed"), f.dim());
    SublevelOptions o;
    if (j.contains("lipschitz")) o.lipschitz = positive(j["lipschitz"], at(path, "lipschitz"));
    if (j.contains("anchors")) {
      const Json& a = j["anchors"];
      if (!a.is_array()) throw SpecError(at(path, "anchors"), "expected an array of points");
      for (std::size_t i = 0; i < a.size(); ++i) o.anchors.push_back(point_from_json(a[i], at(at(path, "anchors"), i), f.dim()));
    }
    return guarded(path, [&] {
      return DomainPtr(std::make_shared<SublevelDomain>(std::move(f), level, std::move(ambient), seed, o));
    });
  }
  throw SpecError(at(path, "type"), "unknown domain type '" + t + "'");
}

DiscChain chain_from_json(const Json& j, const std::string& path) {
  only_keys(j, path, {"links"});
  const Json& links = require(j, path, "links");
  if (!links.is_array() || links.empty()) throw SpecError(at(path, "links"), "expected a non-empty array");
  std::vector<ChainLink> out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string lp = at(at(path, "links"), i);
    only_keys(links[i], lp, {"c", "d", "zin", "zout"});
    const ComplexPoint c = point_from_json(require(links[i], lp, "c"), at(lp, "c"));
    const ComplexPoint d = point_from_json(require(links[i], lp, "d"), at(lp, "d"), c.dim());
    const cplx zin = complex_from_json(require(links[i], lp, "zin"), at(lp, "zin"));
    const cplx zout = complex_from_json(require(links[i], lp, "zout"), at(lp, "zout"));
    out.push_back(guarded(lp, [&] { return ChainLink{AnalyticDisc(c, d), DiscPoint(zin), DiscPoint(zout)}; }));
  }
  return guarded(path, [&] { return DiscChain(std::move(out)); });
}

Json to_json(const DiscChain& chain) {
  Json links = Json::array();
  for (const auto& l : chain.links()) {
    links.push_back({{"c", to_json(l.disc.center())},
                     {"d", to_json(l.disc.direction())},
                     {"zin", to_json(l.zeta_in.value())},
                     {"zout", to_json(l.zeta_out.value())}});
  }
  return {{"links", links}};
}

SampledCurve curve_from_json(const Json& j, const std::string& path) {
  only_keys(j, path, {"params", "points"});
  const Json& p = require(j, path, "params");
  const Json& z = require(j, path, "points");
  if (!p.is_array() || !z.is_array() || p.size() != z.size() || p.empty()) {
    throw SpecError(path, "params and points must be non-empty arrays of equal length");
  }
  std::vector<double> params;
  std::vector<ComplexPoint> points;
  for (std::size_t i = 0; i < p.size(); ++i) {
    params.push_back(number(p[i], at(at(path, "params"), i)));
    const std::string zp = at(at(path, "points"), i);
    if (!z[i].is_array() || z[i].empty() || z[i].size() % 2 != 0) throw SpecError(zp, "expected [re, im, re, im, ...]");
    std::vector<cplx> c;
    for (std::size_t k = 0; k < z[i].size(); k += 2) c.emplace_back(number(z[i][k], zp), number(z[i][k + 1], zp));
    points.emplace_back(std::move(c));
  }
  return guarded(path, [&] { return SampledCurve(std::move(params), std::move(points)); });
}

Json to_json(const SampledCurve& curve) {
  Json pts = Json::array();
  for (const auto& z : curve.points()) {
    Json flat = Json::array();
    for (std::size_t k = 0; k < z.dim(); ++k) {
      flat.push_back(z[k].real());
      flat.push_back(z[k].imag());
    }
    pts.push_back(std::move(flat));
  }
  return {{"params", curve.params()}, {"points", std::move(pts)}};
}

Json number_or_null(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

Json to_json(const LadderReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"item", c.item}, {"description", c.description}, {"passed", c.passed}, {"witnesses", c.witnesses}});
  }
  return {{"depth", report.depth}, {"all_passed", report.all_passed()}, {"checks", checks}};
}

Json to_json(const DistanceEstimate& e) {
  Json out = {{"lower", e.lower},
              {"lower_certificate", e.lower_certificate},
              {"upper", number_or_null(e.upper)},
              {"budget_used", e.budget_used}};
  if (!e.upper) out["upper_reason"] = e.upper_reason;
  if (e.chain) out["chain"] = to_json(*e.chain);
  return out;
}

Json to_json(const SliceReport& r) {
  return {{"g", to_json(r.g)},
          {"omega", to_json(r.omega)},
          {"omega_lower_own", r.omega_lower_own},
          {"omega_upper_own", number_or_null(r.omega_upper_own)},
          {"overlap", r.overlap},
          {"upper_transfer", r.upper_transfer},
          {"lower_transfer", r.lower_transfer},
          {"passed", r.passed},
          {"sandwich_checked", r.sandwich_checked}};
}

Json to_json(const UCandidateReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", number_or_null(c.value)},
                      {"tolerance", c.tolerance},
                      {"samples", c.samples},
                      {"detail", c.detail}});
  }
  return {{"accepted", r.accepted()}, {"u_min_estimate", r.u_min_estimate}, {"checks", checks}};
}

Json to_json(const VisibilityReport& r) {
  Json curves = Json::array();
  for (const auto& c : r.curves) {
    Json row = {{"curve", c.index},
                {"tested", c.tested},
                {"chain_found", c.chain_found},
                {"verdict", to_string(c.verdict)},
                {"length", c.length},
                {"max_delta", c.max_delta}};
    row["start"] = c.start ? to_json(*c.start) : Json(nullptr);
    row["end"] = c.end ? to_json(*c.end) : Json(nullptr);
    curves.push_back(std::move(row));
  }
  return {{"p", to_json(r.p)},
          {"q", to_json(r.q)},
          {"r_nbhd", r.r_nbhd},
          {"pool_radius", r.pool_radius},
          {"lambda", r.lambda},
          {"kappa", r.kappa},
          {"tested", r.tested},
          {"passing", r.passing},
          {"epsilon_star", number_or_null(r.epsilon_star)},
          {"curves", curves}};
}

Json to_json(const AlmostGeodesicVerdict& v) {
  Json pairs = Json::array();
  for (const auto& p : v.pairs) {
    pairs.push_back({{"s", p.s},
                     {"t", p.t},
                     {"lower", p.lower},
                     {"upper", number_or_null(p.upper)},
                     {"band", {p.band_lo, p.band_hi}},
                     {"verdict", to_string(p.verdict)}});
  }
  Json speeds = Json::array();
  for (const auto& s : v.speeds) {
    speeds.push_back({{"t", s.t},
                      {"lower", s.lower},
                      {"upper", s.upper},
                      {"tolerance", s.tolerance},
                      {"verdict", to_string(s.verdict)}});
  }
  return {{"lambda", v.lambda},
          {"kappa", v.kappa},
          {"delta_min", v.delta_min},
          {"condition_a", to_string(v.condition_a)},
          {"condition_b", to_string(v.condition_b)},
          {"overall", to_string(v.overall)},
          {"pairs", pairs},
          {"speeds", speeds}};
}

}  // namespace kobalab
