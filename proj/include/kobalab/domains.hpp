#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kobalab/field.hpp"
#include "kobalab/point.hpp"

namespace kobalab {

enum class Membership { inside, outside, indeterminate };

const char* to_string(Membership m) noexcept;

struct EnclosingBall {
  ComplexPoint center;
  double radius = 0.0;
};

/// Affine functional l(z) = sum_j coefficients_j z_j + offset mapping the whole
/// domain into the unit disc. Holomorphic, hence Kobayashi distance decreasing.
struct DiscProjection {
  ComplexPoint coefficients;
  cplx offset;
  std::string label;

  cplx apply(const ComplexPoint& z) const;
  /// Linear part applied to a tangent vector.
  cplx apply_linear(const ComplexPoint& v) const;
};

/// Exact answer to "does zeta -> c + zeta d map the closed disc |zeta| <= rho
/// into the domain", for domains that can decide it in closed form.
struct AffineDiscTest {
  bool inside = false;
  cplx witness;  // a parameter whose image leaves the domain (when !inside)
};

/// Bounded domain in C^n seen through membership, certified inner radii and an
/// enclosing ball. Implementations are immutable and safe for concurrent use.
class DomainOracle {
 public:
  virtual ~DomainOracle() = default;

  virtual std::size_t dimension() const noexcept = 0;
  virtual std::string kind() const = 0;

  /// Throws on dimension mismatch.
  Membership membership(const ComplexPoint& z) const;
  bool contains(const ComplexPoint& z) const { return membership(z) == Membership::inside; }

  /// Certified lower bound delta with B(z, delta) inside the domain. Throws if z
  /// is not (certifiably) in the domain.
  double boundary_distance(const ComplexPoint& z) const;

  /// Radius of a Euclidean ball about z certified to lie in the open set the
  /// domain is carved from; 0 when z is not in that set. For sublevel domains the
  /// open set is the whole sublevel set, not only the seed's component.
  virtual double certified_radius(const ComplexPoint& z) const = 0;

  virtual EnclosingBall enclosing_ball() const = 0;
  virtual std::vector<DiscProjection> disc_projections() const { return {}; }
  virtual std::optional<AffineDiscTest> test_affine_disc(const ComplexPoint& /*c*/,
                                                         const ComplexPoint& /*d*/,
                                                         double /*rho*/) const {
    return std::nullopt;
  }
  /// Supremum of s >= 0 such that zeta -> c + zeta s d maps |zeta| <= rho into
  /// the domain, for domains with a closed form. 0 when c is outside; may be
  /// +inf when d has no effect on membership.
  virtual std::optional<double> max_affine_disc_scale(const ComplexPoint& /*c*/, const ComplexPoint& /*d*/,
                                                      double /*rho*/) const {
    return std::nullopt;
  }

 protected:
  virtual Membership do_membership(const ComplexPoint& z) const = 0;
};

using DomainPtr = std::shared_ptr<const DomainOracle>;

class BallDomain final : public DomainOracle {
 public:
  BallDomain(ComplexPoint center, double radius);

  std::size_t dimension() const noexcept override { return center_.dim(); }
  std::string kind() const override { return "ball"; }
  double certified_radius(const ComplexPoint& z) const override;
  EnclosingBall enclosing_ball() const override { return {center_, radius_}; }
  std::optional<AffineDiscTest> test_affine_disc(const ComplexPoint& c, const ComplexPoint& d,
                                                 double rho) const override;
  std::optional<double> max_affine_disc_scale(const ComplexPoint& c, const ComplexPoint& d,
                                              double rho) const override;

  const ComplexPoint& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

 protected:
  Membership do_membership(const ComplexPoint& z) const override;

 private:
  ComplexPoint center_;
  double radius_;
};

/// Product of discs prod_j D(center_j, radius_j).
class PolydiscDomain final : public DomainOracle {
 public:
  PolydiscDomain(ComplexPoint center, std::vector<double> radii);

  std::size_t dimension() const noexcept override { return center_.dim(); }
  std::string kind() const override { return "polydisc"; }
  double certified_radius(const ComplexPoint& z) const override;
  EnclosingBall enclosing_ball() const override;
  std::vector<DiscProjection> disc_projections() const override;
  std::optional<AffineDiscTest> test_affine_disc(const ComplexPoint& c, const ComplexPoint& d,
                                                 double rho) const override;
  std::optional<double> max_affine_disc_scale(const ComplexPoint& c, const ComplexPoint& d,
                                              double rho) const override;

  const ComplexPoint& center() const noexcept { return center_; }
  const std::vector<double>& radii() const noexcept { return radii_; }

 protected:
  Membership do_membership(const ComplexPoint& z) const override;

 private:
  ComplexPoint center_;
  std::vector<double> radii_;
};

/// Cartesian product of domains; coordinates are concatenated in factor order.
class ProductDomain final : public DomainOracle {
 public:
  explicit ProductDomain(std::vector<DomainPtr> factors);

  std::size_t dimension() const noexcept override { return dim_; }
  std::string kind() const override { return "product"; }
  double certified_radius(const ComplexPoint& z) const override;
  EnclosingBall enclosing_ball() const override;
  std::vector<DiscProjection> disc_projections() const override;
  std::optional<AffineDiscTest> test_affine_disc(const ComplexPoint& c, const ComplexPoint& d,
                                                 double rho) const override;
  std::optional<double> max_affine_disc_scale(const ComplexPoint& c, const ComplexPoint& d,
                                              double rho) const override;

  const std::vector<DomainPtr>& factors() const noexcept { return factors_; }

 protected:
  Membership do_membership(const ComplexPoint& z) const override;

 private:
  std::vector<ComplexPoint> split(const ComplexPoint& z) const;

  std::vector<DomainPtr> factors_;
  std::size_t dim_ = 0;
};

struct SublevelOptions {
  /// Lipschitz bound of the defining function on the ambient domain; estimated
  /// from sampled gradients (times `lipschitz_safety`) when absent.
  std::optional<double> lipschitz;
  double lipschitz_safety = 1.5;
  std::size_t lipschitz_samples = 4096;
  /// Extra points of the seed's component. Each is certified at construction by
  /// a path from the seed or an earlier anchor.
  std::vector<ComplexPoint> anchors;
  /// Tighter enclosing ball than the ambient one, when known.
  std::optional<EnclosingBall> enclosing;
  /// Maximum field evaluations spent certifying one segment.
  std::size_t segment_budget = 1U << 14;
};

/// Connected component, containing `seed`, of {z in ambient : f(z) < level}.
///
/// Component membership is decided by straight-segment certificates from the
/// seed (or an anchor): the segment is subdivided until consecutive certified
/// balls overlap. Exhausting the budget yields Membership::indeterminate.
class SublevelDomain final : public DomainOracle {
 public:
  SublevelDomain(ScalarField field, double level, DomainPtr ambient, ComplexPoint seed,
                 SublevelOptions options = {});

  std::size_t dimension() const noexcept override { return field_.dim(); }
  std::string kind() const override { return "sublevel"; }
  double certified_radius(const ComplexPoint& z) const override;
  EnclosingBall enclosing_ball() const override;
  std::vector<DiscProjection> disc_projections() const override {
    return ambient_->disc_projections();
  }

  const ScalarField& field() const noexcept { return field_; }
  double level() const noexcept { return level_; }
  double lipschitz() const noexcept { return lipschitz_; }
  const DomainPtr& ambient() const noexcept { return ambient_; }
  const ComplexPoint& seed() const noexcept { return anchors_.front(); }
  bool enclosing_is_estimate() const noexcept { return !options_.enclosing.has_value(); }

  /// Certificate that the segment [a, b] lies in the sublevel set.
  Membership certify_segment(const ComplexPoint& a, const ComplexPoint& b) const;

 protected:
  Membership do_membership(const ComplexPoint& z) const override;

 private:
  ScalarField field_;
  double level_;
  DomainPtr ambient_;
  SublevelOptions options_;
  std::vector<ComplexPoint> anchors_;
  double lipschitz_ = 0.0;
};

/// The slice embedding C^m -> C^n, z -> (z, 0, ..., 0), with n > m.
class ProductSlice {
 public:
  ProductSlice(std::size_t base_dim, std::size_t total_dim);
  std::size_t base_dim() const noexcept { return m_; }
  std::size_t total_dim() const noexcept { return n_; }
  ComplexPoint embed(const ComplexPoint& z) const;
  /// First m coordinates.
  ComplexPoint project(const ComplexPoint& z) const;

 private:
  std::size_t m_;
  std::size_t n_;
};

/// Pads z with zeros up to dimension n (identity when n == dim z).
ComplexPoint slice_embed(const ComplexPoint& z, std::size_t n);

/// Convenience constructors for the model domains.
DomainPtr unit_ball(std::size_t dim);
DomainPtr unit_polydisc(std::size_t dim);

}  // namespace kobalab
