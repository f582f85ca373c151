#include "pcp/cluster_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double heavy_tail_icdf(double u) {
  // density |y|/(y^2+1)^2; tail P(|y| > R) = 1/(R^2+1)
  u = std::min(std::max(u, 0x1p-53), 1.0 - 0x1p-53);
  if (u < 0.5) return -std::sqrt(1.0 / (2.0 * u) - 1.0);
  return std::sqrt(1.0 / (2.0 * (1.0 - u)) - 1.0);
}
}  // namespace

void ClusterLaw::finish_probs() {
  if (size_probs_.empty())
    throw std::invalid_argument("ClusterLaw: size_probs must be nonempty");
  if (size_probs_.size() > 9)
    throw std::invalid_argument("ClusterLaw: cluster size capped at 8");
  double sum = 0.0;
  for (double p : size_probs_) {
    if (p < 0.0)
      throw std::invalid_argument("ClusterLaw: negative size probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("ClusterLaw: size probabilities must sum to 1");
  size_cdf_.resize(size_probs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < size_probs_.size(); ++i) {
    acc += size_probs_[i];
    size_cdf_[i] = acc;
  }
  size_cdf_.back() = 1.0;
}

ClusterLaw ClusterLaw::product_gaussian(int dim, std::vector<double> size_probs,
                                        double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("ClusterLaw: sigma must be > 0");
  ClusterLaw law;
  law.kind_ = ClusterKind::product_gaussian;
  law.dim_ = dim;
  law.size_probs_ = std::move(size_probs);
  law.sigma_ = sigma;
  law.finish_probs();
  return law;
}

ClusterLaw ClusterLaw::iid_points(std::vector<double> size_probs,
                                  BaseDensity base, double param) {
  ClusterLaw law;
  law.kind_ = ClusterKind::iid_points;
  law.dim_ = 1;
  law.size_probs_ = std::move(size_probs);
  law.base_ = base;
  law.base_param_ = param;
  if (base == BaseDensity::gaussian && !(param > 0.0))
    throw std::invalid_argument("ClusterLaw: gaussian base needs param > 0");
  law.finish_probs();
  return law;
}

ClusterLaw ClusterLaw::per_size_density(int dim,
                                        std::vector<double> size_probs,
                                        std::vector<double> sigma_n) {
  ClusterLaw law;
  law.kind_ = ClusterKind::per_size_density;
  law.dim_ = dim;
  law.size_probs_ = std::move(size_probs);
  law.sigma_n_ = std::move(sigma_n);
  law.finish_probs();
  if (law.sigma_n_.size() != law.size_probs_.size())
    throw std::invalid_argument(
        "ClusterLaw: per-size sigmas must match size_probs length");
  for (std::size_t n = 0; n < law.sigma_n_.size(); ++n)
    if (law.size_probs_[n] > 0.0 && n >= 1 && !(law.sigma_n_[n] > 0.0))
      throw std::invalid_argument("ClusterLaw: sigma_n must be > 0");
  return law;
}

ClusterLaw ClusterLaw::dirac_offsets(int dim, std::vector<double> size_probs,
                                     std::vector<std::vector<Vec>> offsets) {
  ClusterLaw law;
  law.kind_ = ClusterKind::dirac_offsets;
  law.dim_ = dim;
  law.size_probs_ = std::move(size_probs);
  law.offsets_ = std::move(offsets);
  law.finish_probs();
  if (law.offsets_.size() != law.size_probs_.size())
    throw std::invalid_argument(
        "ClusterLaw: offsets must be given per size (including size 0)");
  for (std::size_t n = 0; n < law.offsets_.size(); ++n) {
    if (law.size_probs_[n] > 0.0 && law.offsets_[n].size() != n)
      throw std::invalid_argument(
          "ClusterLaw: size-n offsets must contain exactly n vectors");
    for (const Vec& v : law.offsets_[n])
      if (v.dim != dim)
        throw std::invalid_argument("ClusterLaw: offset dimension mismatch");
  }
  return law;
}

double ClusterLaw::mean_size() const {
  double m = 0.0;
  for (std::size_t n = 0; n < size_probs_.size(); ++n)
    m += static_cast<double>(n) * size_probs_[n];
  return m;
}

int ClusterLaw::sample_size(Rng& rng) const {
  const double u = rng.uniform();
  for (std::size_t n = 0; n < size_cdf_.size(); ++n)
    if (u < size_cdf_[n]) return static_cast<int>(n);
  return n_max();
}

ClusterVector ClusterLaw::sample(Rng& rng) const {
  return sample_given_size(sample_size(rng), rng);
}

ClusterVector ClusterLaw::sample_given_size(int n, Rng& rng) const {
  if (n < 0 || n > n_max())
    throw std::invalid_argument("ClusterLaw: size out of range");
  ClusterVector out;
  out.dim = dim_;
  switch (kind_) {
    case ClusterKind::product_gaussian:
      for (int i = 0; i < n; ++i) {
        Vec p{{}, dim_};
        for (int k = 0; k < dim_; ++k) p[k] = sigma_ * rng.normal();
        out.push_point(p);
      }
      return out;
    case ClusterKind::iid_points:
      for (int i = 0; i < n; ++i) {
        if (base_ == BaseDensity::gaussian)
          out.push_point(vec1(base_param_ * rng.normal()));
        else
          out.push_point(vec1(heavy_tail_icdf(rng.uniform())));
      }
      return out;
    case ClusterKind::per_size_density: {
      const double s = sigma_n_[static_cast<std::size_t>(n)];
      for (int i = 0; i < n; ++i) {
        Vec p{{}, dim_};
        for (int k = 0; k < dim_; ++k) p[k] = s * rng.normal();
        out.push_point(p);
      }
      return out;
    }
    case ClusterKind::dirac_offsets: {
      std::vector<Vec> pts = offsets_[static_cast<std::size_t>(n)];
      // symmetrize: the stored tuple is one representative; the law is the
      // uniform mixture over coordinate permutations
      for (std::size_t i = pts.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform() *
                                                static_cast<double>(i));
        std::swap(pts[i - 1], pts[std::min(j, i - 1)]);
      }
      for (const Vec& p : pts) out.push_point(p);
      return out;
    }
  }
  throw std::logic_error("ClusterLaw: unreachable");
}

double ClusterLaw::point_density(const Vec& u, int size) const {
  switch (kind_) {
    case ClusterKind::product_gaussian:
    case ClusterKind::per_size_density:
    case ClusterKind::iid_points: {
      if (kind_ == ClusterKind::iid_points && base_ == BaseDensity::heavy_tail) {
        const double y = u[0];
        const double q = y * y + 1.0;
        return std::abs(y) / (q * q);
      }
      double s = sigma_;
      if (kind_ == ClusterKind::per_size_density)
        s = sigma_n_[static_cast<std::size_t>(size)];
      if (kind_ == ClusterKind::iid_points) s = base_param_;
      const double norm_c = 1.0 / std::sqrt(kTwoPi * s * s);
      double dens = 1.0;
      for (int k = 0; k < dim_; ++k)
        dens *= norm_c * std::exp(-u[k] * u[k] / (2.0 * s * s));
      return dens;
    }
    case ClusterKind::dirac_offsets:
      throw std::logic_error("ClusterLaw: dirac law has no density");
  }
  return 0.0;
}

double ClusterLaw::density_n(const ClusterVector& ybar) const {
  if (!has_density())
    throw std::logic_error("ClusterLaw: dirac law has no density");
  if (ybar.dim != dim_)
    throw std::invalid_argument("ClusterLaw: dimension mismatch");
  const int n = ybar.size();
  if (n > n_max()) return 0.0;
  double dens = 1.0;
  for (int i = 0; i < n; ++i) dens *= point_density(ybar.point(i), n);
  return dens;
}

Vec ClusterLaw::point_log_density_grad(const Vec& u, int size) const {
  if (!has_density())
    throw std::logic_error("ClusterLaw: dirac law has no density");
  Vec g{{}, dim_};
  if (kind_ == ClusterKind::iid_points && base_ == BaseDensity::heavy_tail) {
    const double y = u[0];
    g[0] = (y == 0.0) ? 0.0 : 1.0 / y - 4.0 * y / (y * y + 1.0);
    return g;
  }
  double s = sigma_;
  if (kind_ == ClusterKind::per_size_density)
    s = sigma_n_[static_cast<std::size_t>(size)];
  if (kind_ == ClusterKind::iid_points) s = base_param_;
  for (int k = 0; k < dim_; ++k) g[k] = -u[k] / (s * s);
  return g;
}

double ClusterLaw::point_tail_prob(double R) const {
  if (R <= 0.0) return 1.0;
  switch (kind_) {
    case ClusterKind::product_gaussian:
    case ClusterKind::per_size_density:
    case ClusterKind::iid_points: {
      if (kind_ == ClusterKind::iid_points && base_ == BaseDensity::heavy_tail)
        return 1.0 / (R * R + 1.0);
      double s = sigma_;
      if (kind_ == ClusterKind::per_size_density) {
        s = 0.0;
        for (std::size_t n = 1; n < sigma_n_.size(); ++n)
          if (size_probs_[n] > 0.0) s = std::max(s, sigma_n_[n]);
        if (s == 0.0) return 0.0;
      }
      if (kind_ == ClusterKind::iid_points) s = base_param_;
      // union bound over coordinates
      return std::min(1.0, static_cast<double>(dim_) *
                               std::erfc(R / (s * std::sqrt(2.0))));
    }
    case ClusterKind::dirac_offsets: {
      double maxr = 0.0;
      for (const auto& per_size : offsets_)
        for (const Vec& v : per_size)
          for (int k = 0; k < dim_; ++k) maxr = std::max(maxr, std::abs(v[k]));
      return R >= maxr ? 0.0 : 1.0;
    }
  }
  return 1.0;
}

double ClusterLaw::radius_for_tail(double eps) const {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("ClusterLaw: tail level must be in (0,1)");
  const double per_point = eps / static_cast<double>(std::max(1, n_max()));
  if (kind_ == ClusterKind::dirac_offsets) {
    double maxr = 0.0;
    for (const auto& per_size : offsets_)
      for (const Vec& v : per_size)
        for (int k = 0; k < dim_; ++k) maxr = std::max(maxr, std::abs(v[k]));
    return maxr + 1e-9;
  }
  if (kind_ == ClusterKind::iid_points && base_ == BaseDensity::heavy_tail)
    return std::sqrt(std::max(0.0, 1.0 / per_point - 1.0));
  // Gaussian family: bisect the coordinate-union tail bound.
  double lo = 0.0, hi = 1.0;
  while (point_tail_prob(hi) > per_point && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (point_tail_prob(mid) > per_point)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

bool ClusterLaw::gaussian_form(int size, double* sigma_out) const {
  switch (kind_) {
    case ClusterKind::product_gaussian:
      if (sigma_out) *sigma_out = sigma_;
      return true;
    case ClusterKind::iid_points:
      if (base_ == BaseDensity::gaussian) {
        if (sigma_out) *sigma_out = base_param_;
        return true;
      }
      return false;
    case ClusterKind::per_size_density:
      if (size < 0 || size > n_max()) return false;
      if (sigma_out) *sigma_out = sigma_n_[static_cast<std::size_t>(size)];
      return true;
    case ClusterKind::dirac_offsets:
      return false;
  }
  return false;
}

}  // namespace pcp
