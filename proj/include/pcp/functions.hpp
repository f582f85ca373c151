#pragma once

#include <memory>
#include <vector>

#include "pcp/geometry.hpp"

namespace pcp {

struct FnEval {
  double value = 0.0;
  Vec grad;
  double lap = 0.0;
};

// Compactly supported smooth test function from a closed catalog: scaled
// bumps, box plateaus, and finite sums/products of those. Catalog-only by
// design — every member carries an analytic gradient, Laplacian, support box,
// and a sup bound, which the calculus and quasi-invariance modules rely on.
class SmoothFn {
 public:
  SmoothFn() = default;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  double laplacian(const Vec& x) const;
  FnEval eval_all(const Vec& x) const;

  const Window& support() const;
  int dim() const;
  bool nonnegative() const;  // conservative construction-time flag
  double sup_bound() const;
  bool is_zero() const;

  // c * exp(-1 / (1 - |x-x0|^2/r^2)) inside the ball of radius r, else 0.
  static SmoothFn bump(const Vec& center, double radius, double amplitude);
  // amp on the inner box, smoothly falling to 0 over an `edge` margin inside
  // the box boundary; C-infinity via the standard exp(-1/s) transition.
  static SmoothFn plateau(const Window& box, double edge, double amplitude);
  static SmoothFn sum(const SmoothFn& a, const SmoothFn& b);
  static SmoothFn product(const SmoothFn& a, const SmoothFn& b);
  static SmoothFn zero(int dim);

 private:
  std::shared_ptr<const struct SmoothFnNode> node_;
  explicit SmoothFn(std::shared_ptr<const struct SmoothFnNode> n)
      : node_(std::move(n)) {}
};

// <f, gamma> = sum over atoms of multiplicity * f(atom).
double pair(const SmoothFn& f, const Configuration& g);

// Compactly supported smooth vector field: d scalar components.
class VectorField {
 public:
  explicit VectorField(std::vector<SmoothFn> components);
  int dim() const { return static_cast<int>(components_.size()); }
  Vec value(const Vec& x) const;
  double divergence(const Vec& x) const;
  Vec component_gradient(int i, const Vec& x) const;
  const SmoothFn& component(int i) const {
    return components_[static_cast<std::size_t>(i)];
  }
  const Window& support() const { return support_; }

 private:
  std::vector<SmoothFn> components_;
  Window support_;
};

// Outer scalar profiles g(s) for cylinder functions, all with analytic first
// and second derivatives. `linear` is unbounded and intended for tests only.
enum class OuterKind { linear, tanh_s, sine, gauss, tanh_poly };

struct OuterEval {
  double g = 0.0, dg = 0.0, d2g = 0.0;
};
OuterEval outer_eval(OuterKind k, double s);

// One summand: c * g(a . u + b), with u the vector of inner pairings.
struct CylinderTerm {
  OuterKind kind = OuterKind::tanh_s;
  std::vector<double> a;
  double b = 0.0;
  double c = 1.0;
};

// F(gamma) = sum_t c_t g_t(a_t . u + b_t), u_m = <phi_m, gamma>. Locality:
// F depends on gamma only through atoms inside the union of inner supports.
class CylinderFn {
 public:
  CylinderFn(std::vector<SmoothFn> inner, std::vector<CylinderTerm> terms);

  const std::vector<SmoothFn>& inner() const { return inner_; }
  int n_inner() const { return static_cast<int>(inner_.size()); }
  const Window& inner_support() const { return inner_support_; }
  int dim() const;

  double eval(const Configuration& g) const;

  // Bound form: pairings and outer partials precomputed once per
  // configuration so that per-atom gradients/Laplacians are cheap.
  struct Frame {
    const CylinderFn* fn = nullptr;
    double value = 0.0;
    std::vector<double> u;     // pairings
    std::vector<double> df;    // dF/du_m
    std::vector<double> d2f;   // d2F/du_m du_l, row-major k x k
    Vec grad_at(const Vec& x) const;
    double lap_at(const Vec& x) const;
  };
  Frame bind(const Configuration& g) const;

 private:
  std::vector<SmoothFn> inner_;
  std::vector<CylinderTerm> terms_;
  Window inner_support_;
};

double cylinder_eval(const CylinderFn& F, const Configuration& g);
// Chain-rule gradient/Laplacian at atom `atom_index` (error if out of range).
Vec cylinder_gradient(const CylinderFn& F, const Configuration& g,
                      int atom_index);
double cylinder_laplacian(const CylinderFn& F, const Configuration& g,
                          int atom_index);

// Bump-translation diffeomorphism phi(x) = x + eps * b(x) * u with
// |eps| * Lip(b) < 1 (checked at construction on a grid over the support).
// Inverse by fixed-point iteration; Jacobian determinant is analytic:
// det(I + eps u grad b^T) = 1 + eps grad b . u. The inverse map is available
// as a first-class object through inverted().
class CompactDiffeo {
 public:
  CompactDiffeo(SmoothFn bump, const Vec& direction, double eps);

  Vec apply(const Vec& x) const;
  Vec inverse(const Vec& x) const;
  // Jacobian determinant of the map `apply` at x.
  double jacobian(const Vec& x) const;
  const Window& support() const { return support_; }
  int dim() const { return direction_.dim; }
  double eps() const { return eps_; }
  double lip_bound() const { return lip_; }
  bool is_inverted() const { return inverted_; }

  CompactDiffeo inverted() const;

  static CompactDiffeo identity(int dim);

 private:
  SmoothFn bump_;
  Vec direction_;
  double eps_ = 0.0;
  double lip_ = 0.0;
  Window support_;
  bool inverted_ = false;

  Vec forward_base(const Vec& x) const;
  Vec inverse_base(const Vec& y) const;
  double jacobian_base(const Vec& x) const;
};

// phi applied componentwise to a cluster vector.
ClusterVector lift_diffeo(const CompactDiffeo& phi, const ClusterVector& xbar);
// phi applied to every atom location (multiplicities preserved, re-merged).
Configuration apply_diffeo_config(const CompactDiffeo& phi,
                                  const Configuration& g);

}  // namespace pcp
