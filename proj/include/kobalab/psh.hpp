#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kobalab/construction.hpp"
#include "kobalab/domains.hpp"
#include "kobalab/field.hpp"

namespace kobalab {

enum class LeviMode { analytic, finite_difference };
const char* to_string(LeviMode m) noexcept;

struct LeviReport {
  ComplexPoint point;
  double min_eigenvalue = 0.0;
  double step = 0.0;
  LeviMode mode = LeviMode::analytic;
};

/// 1e-4 * max(1, |z|_inf).
double default_step(const ComplexPoint& z);

/// Central-difference Levi matrix L(j, k) ~ d^2 f / dzbar_j dz_k, Hermitian.
LeviMatrix levi_matrix_fd(const ScalarField& f, const ComplexPoint& z, double step);
/// Central-difference gradient g_j ~ df/dx_j + i df/dy_j.
std::vector<cplx> gradient_fd(const ScalarField& f, const ComplexPoint& z, double step);

/// Analytic supplier when present (unless force_fd), central differences otherwise.
LeviReport levi_min_eigenvalue(const ScalarField& f, const ComplexPoint& z, double step,
                               bool force_fd = false);
/// Norm of the real gradient.
double gradient_nonvanishing(const ScalarField& f, const ComplexPoint& z, double step,
                             bool force_fd = false);
/// Minimum of the Levi form over unit vectors of the complex tangent space at p
/// (Hermitian-orthogonal complement of the gradient). The caller is responsible
/// for p being a boundary point.
double strong_pseudoconvexity_check(const ScalarField& f, const ComplexPoint& p, double step,
                                    bool force_fd = false);

/// h(z) = u(z1, z2) + sum_{j >= 3} |z_j|^2, n >= 3.
ScalarField lift_h(const ScalarField& u, std::size_t n);

struct GridSpec {
  double exclusion_radius = 1e-3;
  double outer_radius = 2.99;
  std::size_t shells = 24;
  std::size_t directions = 48;
  /// X_nu sampled for nu <= x_segments on a polar grid of the disc parameter.
  std::size_t x_segments = 20;
  std::size_t x_radial = 6;
  std::size_t x_angular = 12;
  double sphere_inner = 2.9;
  double sphere_outer = 2.999;
  std::size_t sphere_shells = 4;
  std::size_t sphere_directions = 256;
  double origin_tolerance = 1e-9;
  double gradient_tolerance = 1e-8;
  double levi_tolerance = 0.0;
  /// 0 selects default_step at each point.
  double step = 0.0;
  bool force_fd = false;
  std::uint64_t seed = 0;
};

struct GridCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string detail;
};

struct UCandidateReport {
  std::vector<GridCheck> checks;
  /// Smallest sampled value of u; used to size the tail ambient of the lift.
  double u_min_estimate = 0.0;

  bool accepted() const;
  const GridCheck& check(const std::string& name) const;
  std::vector<std::string> failed() const;
};

UCandidateReport verify_u_candidate(const ScalarField& u, const SibonyLadder& ladder,
                                    const GridSpec& spec = {});

/// Penalized logarithmic potentials concentrated near the ladder lines,
/// normalized so that u(0) = 1. Experimental; never trusted without
/// verify_u_candidate.
struct ExperimentalCandidateParams {
  std::size_t terms = 30;
  double eps = 0.5;
  double d0 = 2.0;
  double d1 = 0.5;
  double mu = 0.05;
  double eta = 0.05;
};

ScalarField sibony_experimental_candidate(const SibonyLadder& ladder,
                                          const ExperimentalCandidateParams& params = {});

/// The domain carved out by a candidate u: for n == 2 the component of
/// {u < 1} in B^2(0, 3) containing x_1; for n >= 3 the component of {h < 1}
/// with the tail coordinates confined to a ball of radius
/// sqrt(1 - u_min_estimate) (with slack). Ladder points are anchors.
DomainPtr candidate_domain(const ScalarField& u, std::size_t n, const SibonyLadder& ladder,
                           double u_min_estimate);

}  // namespace kobalab
