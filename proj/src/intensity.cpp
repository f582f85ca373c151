#include "pcp/intensity.hpp"

#include <cmath>
#include <stdexcept>

#include "pcp/quadrature.hpp"

namespace pcp {

namespace {

// integral of e^{|t|} over [a, b], a <= b
double exp_weight_mass(double a, double b) {
  if (a >= 0.0) return std::exp(b) - std::exp(a);
  if (b <= 0.0) return std::exp(-a) - std::exp(-b);
  return (std::exp(-a) - 1.0) + (std::exp(b) - 1.0);
}

// inverse of c -> integral of e^{|t|} over [a, x]
double exp_weight_icdf(double a, double b, double c) {
  if (a >= 0.0) return a + std::log1p(c * std::exp(-a));
  if (b <= 0.0) return -std::log(std::exp(-a) - c);
  const double m_neg = std::exp(-a) - 1.0;
  if (c <= m_neg) return -std::log(std::exp(-a) - c);
  return std::log1p(c - m_neg);
}

}  // namespace

IntensityModel IntensityModel::lebesgue(int dim, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("IntensityModel: scale must be > 0");
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("IntensityModel: unsupported dimension");
  IntensityModel m;
  m.kind_ = IntensityKind::lebesgue;
  m.dim_ = dim;
  m.scale_ = scale;
  return m;
}

IntensityModel IntensityModel::exp_weight() {
  IntensityModel m;
  m.kind_ = IntensityKind::exp_weight;
  m.dim_ = 1;
  m.scale_ = 1.0;
  return m;
}

IntensityModel IntensityModel::bump_density(SmoothFn density) {
  if (!density.nonnegative())
    throw std::invalid_argument(
        "IntensityModel: bump density must be nonnegative");
  if (density.dim() > 2)
    throw std::invalid_argument(
        "IntensityModel: bump densities supported for d <= 2");
  IntensityModel m;
  m.kind_ = IntensityKind::bump_density;
  m.dim_ = density.dim();
  m.scale_ = 1.0;
  m.bump_ = std::move(density);
  return m;
}

double IntensityModel::density(const Vec& x) const {
  switch (kind_) {
    case IntensityKind::lebesgue:
      return scale_;
    case IntensityKind::exp_weight:
      return std::exp(std::abs(x[0]));
    case IntensityKind::bump_density:
      return bump_.value(x);
  }
  return 0.0;
}

void IntensityModel::density_batch(const double* x, double* out,
                                   std::size_t n) const {
  switch (kind_) {
    case IntensityKind::lebesgue:
      for (std::size_t i = 0; i < n; ++i) out[i] = scale_;
      return;
    case IntensityKind::exp_weight:
      for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(std::abs(x[i]));
      return;
    case IntensityKind::bump_density:
      for (std::size_t i = 0; i < n; ++i) out[i] = bump_.value(vec1(x[i]));
      return;
  }
}

double IntensityModel::mass(const Window& w) const {
  if (w.dim != dim_)
    throw std::invalid_argument("IntensityModel::mass: dimension mismatch");
  switch (kind_) {
    case IntensityKind::lebesgue:
      return scale_ * w.volume();
    case IntensityKind::exp_weight:
      return exp_weight_mass(w.lower[0], w.upper[0]);
    case IntensityKind::bump_density: {
      const Window box = box_intersection(w, bump_.support());
      if (box_empty(box)) return 0.0;
      if (dim_ == 1) {
        auto f = [this](const double* x, double* out, std::size_t n) {
          density_batch(x, out, n);
        };
        return integrate_grid_1d(f, box.lower[0], box.upper[0], 1e-10).value;
      }
      auto f = [this](const double* x, double y, double* out, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) out[i] = bump_.value(vec2(x[i], y));
      };
      return integrate_grid_2d(f, box.lower[0], box.upper[0], box.lower[1],
                               box.upper[1], 1e-10)
          .value;
    }
  }
  return 0.0;
}

Vec IntensityModel::sample_on(const Window& w, Rng& rng) const {
  switch (kind_) {
    case IntensityKind::lebesgue: {
      Vec x{{}, dim_};
      for (int k = 0; k < dim_; ++k) {
        const auto i = static_cast<std::size_t>(k);
        x[k] = rng.uniform(w.lower[i], w.upper[i]);
      }
      return x;
    }
    case IntensityKind::exp_weight: {
      const double a = w.lower[0], b = w.upper[0];
      const double M = exp_weight_mass(a, b);
      if (!(M > 0.0))
        throw std::logic_error("IntensityModel: zero-mass window sample");
      return vec1(exp_weight_icdf(a, b, rng.uniform() * M));
    }
    case IntensityKind::bump_density: {
      const Window box = box_intersection(w, bump_.support());
      if (box_empty(box))
        throw std::logic_error("IntensityModel: zero-mass window sample");
      const double sup = bump_.sup_bound();
      for (int attempt = 0; attempt < 1000000; ++attempt) {
        Vec x{{}, dim_};
        for (int k = 0; k < dim_; ++k) {
          const auto i = static_cast<std::size_t>(k);
          x[k] = rng.uniform(box.lower[i], box.upper[i]);
        }
        if (rng.uniform() * sup <= bump_.value(x)) return x;
      }
      throw std::runtime_error("IntensityModel: rejection sampler stalled");
    }
  }
  throw std::logic_error("IntensityModel: unreachable");
}

}  // namespace pcp
