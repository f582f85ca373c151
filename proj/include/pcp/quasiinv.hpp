#pragma once

#include "pcp/functions.hpp"
#include "pcp/model.hpp"
#include "pcp/stats.hpp"

namespace pcp {

// Density ratio of the pushforward of lambda* under the diagonal map
// phi-bar against lambda* itself, evaluated at a cluster vector:
//   rho(ybar) = s(phibar^{-1} ybar) / s(ybar) * prod_i J_phi(phi^{-1}(y_i))^{-1}.
// The Jacobian factors sit at the preimage points: that is the exact
// change-of-variables factor, and it makes rho_phi(phibar(x)) *
// rho_{phi^{-1}}(x) = 1 hold identically (the target-point variant would
// break that identity at O(eps^2)). Returns 1 when either s-value falls
// below the zero-density floor, and 1 for empty cluster vectors.
double rho_lambda_star(const ClusterProcessModel& model,
                       const CompactDiffeo& phi, const ClusterVector& ybar);

// Same ratio one level down: d(phi_* lambda)/d lambda on the base space.
double rho_poisson(const IntensityModel& lambda, const CompactDiffeo& phi,
                   const Vec& x);

// Radon-Nikodym density of the diagonally transformed lifted Poisson field:
//   R(gamma-bar) = exp{ integral of (1 - rho) d lambda* } * prod rho(xbar).
// The normalizing integral runs over cluster vectors meeting supp phi only
// (rho == 1 elsewhere); it is estimated once at construction by MC over the
// centre+cluster representation and cached, with its SE kept for downstream
// error folding.
class RnDensityLifted {
 public:
  RnDensityLifted(const ClusterProcessModel& model, CompactDiffeo phi,
                  long norm_draws, Rng& rng);

  double operator()(const LiftedConfiguration& gbar) const;

  double norm_integral() const { return norm_integral_; }  // int (1-rho) dl*
  double norm_se() const { return norm_se_; }
  const CompactDiffeo& phi() const { return phi_; }

 private:
  const ClusterProcessModel* model_;
  CompactDiffeo phi_;
  double norm_integral_ = 0.0;
  double norm_se_ = 0.0;
};

struct QiResidual {
  MCEstimate lhs;          // E[ F(phi . gamma) ]
  MCEstimate rhs;          // E[ F(gamma) R(gamma-bar) ]
  double residual = 0.0;   // |mean difference| on the common stream
  double paired_se = 0.0;  // SE of the per-draw differences
  double combined_se = 0.0;  // paired SE + normalization-constant SE share
};

// Monte Carlo check of quasi-invariance at the configuration level, with a
// common gamma-bar stream on a window covering supp F and supp phi.
QiResidual quasi_invariance_residual(const ClusterProcessModel& model,
                                     const CompactDiffeo& phi,
                                     const CylinderFn& F, long n_draws,
                                     Rng& rng, long norm_draws = 1000000);

struct L2Check {
  MCEstimate r_mean;    // empirical E[R], expect 1
  MCEstimate r2_mean;   // empirical E[R^2]
  double r2_closed = 0.0;  // exp{ integral of (rho^2 - rho) d lambda }
  double closed_abs_err = 0.0;
};

// Base-space control experiment: for a plain Poisson field on X, the RN
// density R has E[R] = 1 and E[R^2] = exp{ integral of (rho^2-rho) d lambda },
// the latter also computable by quadrature. Both comparisons returned.
L2Check rn_l2_check(const IntensityModel& lambda, const CompactDiffeo& phi,
                    long n_draws, Rng& rng);

}  // namespace pcp
