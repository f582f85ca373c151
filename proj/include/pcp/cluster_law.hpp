#pragma once

#include <vector>

#include "pcp/geometry.hpp"
#include "pcp/rng.hpp"

namespace pcp {

enum class ClusterKind {
  product_gaussian,   // size-n points iid N(0, sigma^2 I_d)
  iid_points,         // iid points from a 1-d catalog base density
  per_size_density,   // size-dependent Gaussian widths sigma_n
  dirac_offsets       // deterministic offsets per size (no density)
};

enum class BaseDensity {
  gaussian,   // N(0, param^2)
  heavy_tail  // density |u| / (u^2+1)^2 on R (P(|u| > R) = 1/(R^2+1))
};

// In-cluster law eta: a finite size distribution (p_0..p_nmax) plus the
// conditional point law given size. All catalog laws are exchangeable; the
// deterministic kind is symmetrized by randomly permuting its offsets.
class ClusterLaw {
 public:
  static ClusterLaw product_gaussian(int dim, std::vector<double> size_probs,
                                     double sigma);
  static ClusterLaw iid_points(std::vector<double> size_probs,
                               BaseDensity base, double param);
  static ClusterLaw per_size_density(int dim, std::vector<double> size_probs,
                                     std::vector<double> sigma_n);
  static ClusterLaw dirac_offsets(int dim, std::vector<double> size_probs,
                                  std::vector<std::vector<Vec>> offsets);

  ClusterKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<double>& size_probs() const { return size_probs_; }
  int n_max() const { return static_cast<int>(size_probs_.size()) - 1; }
  double mean_size() const;

  int sample_size(Rng& rng) const;
  ClusterVector sample(Rng& rng) const;
  ClusterVector sample_given_size(int n, Rng& rng) const;

  bool has_density() const { return kind_ != ClusterKind::dirac_offsets; }
  // Normalized per-size density: integrates to 1 over X^n. The joint cluster
  // density h_n = p_n * density_n.
  double density_n(const ClusterVector& ybar) const;
  // Density of a single in-cluster point offset (density_n factorizes).
  double point_density(const Vec& u, int size) const;
  // Gradient of log density_n with respect to one point's offset u.
  Vec point_log_density_grad(const Vec& u, int size) const;

  // Tail radius: P(some point of a cluster lies beyond max-norm R of the
  // centre) <= eps, by union bound over at most n_max points.
  double radius_for_tail(double eps) const;
  double point_tail_prob(double R) const;  // single-point |.|_inf tail

  bool bounded_support() const { return kind_ == ClusterKind::dirac_offsets; }
  bool has_fixed_atoms() const { return kind_ == ClusterKind::dirac_offsets; }

  // Gaussian-form access (product_gaussian / per_size_density / iid gaussian)
  bool gaussian_form(int size, double* sigma_out) const;
  double sigma() const { return sigma_; }
  BaseDensity base() const { return base_; }
  double base_param() const { return base_param_; }
  const std::vector<std::vector<Vec>>& offsets() const { return offsets_; }

 private:
  ClusterKind kind_ = ClusterKind::product_gaussian;
  int dim_ = 1;
  std::vector<double> size_probs_;
  std::vector<double> size_cdf_;
  double sigma_ = 1.0;
  BaseDensity base_ = BaseDensity::gaussian;
  double base_param_ = 1.0;
  std::vector<double> sigma_n_;
  std::vector<std::vector<Vec>> offsets_;

  ClusterLaw() = default;
  void finish_probs();
};

}  // namespace pcp
