#pragma once

#include <cstdint>

#include "pcp/cluster_law.hpp"
#include "pcp/intensity.hpp"

namespace pcp {

// Numerical policy knobs, all explicit so results are reproducible from the
// emitted manifest alone.
struct Numerics {
  double quad_abs_tol = 1e-8;    // per-integral absolute tolerance
  double tail_sigmas = 8.0;      // Gaussian quadrature tail cut, in sigmas
  double eps_trunc = 1e-4;       // cluster-spread tail bound for truncation
  double r_trunc = 0.0;          // 0 => derive from eps_trunc analytically
  double merge_tol = 1e-12;      // coincident-atom merge tolerance
  int n_max = 8;                 // hard cap on cluster size
  double density_floor = 1e-300; // zero-density convention threshold
  long mc_default_n = 100000;    // default Monte Carlo sample count
  double mc_se_factor = 3.0;     // acceptance band in standard errors
  double dt_default = 1e-3;      // Euler-Maruyama default step
};

// The (lambda, eta) pair with a numerics policy and base seed. Immutable.
class ClusterProcessModel {
 public:
  ClusterProcessModel(IntensityModel lambda, ClusterLaw eta, Numerics num,
                      std::uint64_t seed);

  int dim() const { return lambda_.dim(); }
  const IntensityModel& lambda() const { return lambda_; }
  const ClusterLaw& eta() const { return eta_; }
  const Numerics& numerics() const { return num_; }
  std::uint64_t seed() const { return seed_; }

  double r_trunc() const { return r_trunc_; }
  // MC estimate (at construction) of P(cluster has a point beyond r_trunc).
  double trunc_tail_estimate() const { return trunc_tail_estimate_; }

  // lambda* has densities s_n iff eta has densities (all catalog lambdas are
  // absolutely continuous).
  bool absolutely_continuous() const { return eta_.has_density(); }
  // The printed closed form for s_n applies to the unit product-Gaussian law
  // over unit-rate Lebesgue centres in d = 1.
  bool gaussian_closed_form_available() const;

 private:
  IntensityModel lambda_;
  ClusterLaw eta_;
  Numerics num_;
  std::uint64_t seed_ = 0;
  double r_trunc_ = 0.0;
  double trunc_tail_estimate_ = 0.0;
};

}  // namespace pcp
