#pragma once

#include "pcp/functions.hpp"
#include "pcp/geometry.hpp"
#include "pcp/rng.hpp"

namespace pcp {

enum class IntensityKind { lebesgue, exp_weight, bump_density };

// Background centre intensity: a sigma-finite measure on R^d given by a
// density against Lebesgue measure. Three catalog kinds:
//   lebesgue     - constant density c > 0 (translation invariant)
//   exp_weight   - density e^{|x|}, d = 1 only; finite on bounded windows but
//                  not integrable at infinity (the blow-up ingredient)
//   bump_density - a nonnegative catalog SmoothFn with compact support
class IntensityModel {
 public:
  static IntensityModel lebesgue(int dim, double scale);
  static IntensityModel exp_weight();
  static IntensityModel bump_density(SmoothFn density);

  IntensityKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double scale() const { return scale_; }

  bool translation_invariant() const { return kind_ == IntensityKind::lebesgue; }
  bool non_atomic() const { return true; }  // all catalog kinds have densities
  bool integrable_at_infinity() const {
    return kind_ == IntensityKind::bump_density;
  }

  double density(const Vec& x) const;
  void density_batch(const double* x, double* out, std::size_t n) const;  // d=1
  double mass(const Window& w) const;
  // One point from the normalized restriction lambda|_w / lambda(w).
  Vec sample_on(const Window& w, Rng& rng) const;

 private:
  IntensityKind kind_ = IntensityKind::lebesgue;
  int dim_ = 1;
  double scale_ = 1.0;
  SmoothFn bump_;
  IntensityModel() = default;
};

}  // namespace pcp
