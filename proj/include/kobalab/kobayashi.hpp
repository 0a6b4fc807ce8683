#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kobalab/analytic_disc.hpp"
#include "kobalab/construction.hpp"
#include "kobalab/domains.hpp"
#include "kobalab/error.hpp"

namespace kobalab {

inline constexpr double kDefaultMargin = 1e-3;

/// Raised when a pipeline runs out of budget or meets an undecidable
/// certificate, as opposed to a certified failure.
class Indeterminate : public Error {
 public:
  using Error::Error;
};

/// Oracle-evaluation counter. Not thread-safe; one per task.
class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }
  std::size_t used() const noexcept { return used_; }
  std::size_t remaining() const noexcept { return limit_ - used_; }
  bool exhausted() const noexcept { return used_ >= limit_; }
  /// Charges n evaluations; false (and nothing charged) if that would exceed the limit.
  bool spend(std::size_t n = 1) noexcept;

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

enum class DiscStatus { certified, rejected, indeterminate };
const char* to_string(DiscStatus s) noexcept;

struct DiscCertificate {
  DiscStatus status = DiscStatus::indeterminate;
  cplx witness;  // when rejected: a parameter |witness| <= rho whose image leaves the domain
  std::size_t evaluations = 0;
  double rho = 0.0;
};

/// Certifies c + zeta d in the domain for all |zeta| <= 1 - margin, either by the
/// domain's closed-form test or by a quadtree covering of the parameter disc
/// with certified balls. The center's membership is checked first.
DiscCertificate disc_in_domain(const AnalyticDisc& disc, const DomainOracle& domain, double margin = kDefaultMargin,
                               std::size_t max_evaluations = 1U << 16);

/// Poincare cost of a chain used on the rho-rescaled discs: sum p(zin/rho, zout/rho).
double chain_cost(const DiscChain& chain, double margin = kDefaultMargin);

/// Certifies every link and returns chain_cost. Throws Error on a rejected
/// disc and Indeterminate when certification runs out of evaluations.
double chain_upper_bound(const DomainOracle& domain, const DiscChain& chain, double margin = kDefaultMargin);

struct SearchOptions {
  std::size_t budget = 10000;
  std::size_t restarts = 16;
  std::size_t max_links = 4;
  double margin = kDefaultMargin;
  std::uint64_t seed = 0;
  /// Extra chains from z to w tried before the search.
  std::vector<DiscChain> seeds;
};

struct UpperBound {
  std::optional<double> value;  // nullopt is the +infinity flag
  std::optional<DiscChain> chain;
  std::size_t budget_used = 0;
  std::string reason;
};

UpperBound search_upper_bound(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w,
                              const SearchOptions& options = {});

struct LowerBound {
  double value = 0.0;
  std::string certificate;
};

LowerBound lower_bound(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w);

struct DistanceEstimate {
  double lower = 0.0;
  std::string lower_certificate;
  std::optional<double> upper;
  std::optional<DiscChain> chain;
  std::size_t budget_used = 0;
  std::string upper_reason;

  /// upper - lower, or nullopt when the upper bound is missing.
  std::optional<double> width() const;
  bool contains(double value) const { return lower <= value && (!upper || value <= *upper); }
};

DistanceEstimate estimate_distance(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& w,
                                   const SearchOptions& options = {});

struct MetricOptions {
  /// Discs are certified on |zeta| <= 1 - margin; closed-form tests make a tiny margin affordable.
  double margin = 1e-9;
  double relative_tolerance = 1e-7;
  std::size_t budget = 20000;
  std::size_t disc_budget = 4096;
};

struct MetricEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_certificate;
};

/// Two-sided bounds for k(z; v). Upper: best off-center affine disc through z in
/// direction v; lower: enclosing-ball metric and disc projections.
MetricEstimate infinitesimal_bounds(const DomainOracle& domain, const ComplexPoint& z, const ComplexPoint& v,
                                    const MetricOptions& options = {});

struct SliceOptions {
  SearchOptions search;
  double tolerance = 1e-9;
  std::size_t sandwich_samples = 256;
  std::uint64_t seed = 0;
};

struct SliceReport {
  DistanceEstimate g;
  DistanceEstimate omega;
  /// Projection bound K_G(z, w) <= K_Omega((z,0), (w,0)) folded into omega.lower.
  double omega_lower_own = 0.0;
  std::optional<double> omega_upper_own;
  bool overlap = false;
  bool upper_transfer = false;
  bool lower_transfer = false;
  bool passed = false;
  std::size_t sandwich_checked = 0;
};

/// Compares brackets for K_G(z, w) and K_Omega((z,0), (w,0)). Throws Error when a
/// sampled point violates G x {0} in Omega in G x C^(n-m).
SliceReport slice_identity_check(const DomainOracle& g, const DomainOracle& omega, const ComplexPoint& z,
                                 const ComplexPoint& w, const SliceOptions& options = {});

struct CauchyRow {
  std::size_t nu;
  double upper;  // U(nu), bound on K(x_nu, x_{nu+1})
  double tail;   // T(nu), bound on sum_{j >= nu} U(j)
  double norm;   // |x_nu|
};

struct CauchyTable {
  std::vector<CauchyRow> rows;
  double ratio = 0.0;
  double observed_ratio = 0.0;
  double margin = kDefaultMargin;

  std::string csv() const;
};

/// U(nu) from the lifted phi_nu link, nu = 1 .. depth-1. Throws Error naming nu
/// when a lifted ladder point is not in the domain or a link disc is rejected,
/// Indeterminate when a certificate cannot be decided.
CauchyTable cauchy_table(const DomainOracle& omega, const SibonyLadder& ladder, double margin = kDefaultMargin,
                         double ratio_floor = 0.51);

}  // namespace kobalab
