#pragma once

#include <vector>

#include "pcp/model.hpp"
#include "pcp/stats.hpp"

namespace pcp {

enum class ConvMethod {
  automatic,        // closed form when the model admits it, else quadrature
  quadrature,       // adaptive expanding quadrature over centres
  gaussian_closed   // product-Gaussian-over-Lebesgue closed form only
};

struct ConvResult {
  double s = 0.0;            // normalized convolution density s_n(ybar)
  double abs_err = 0.0;      // quadrature error estimate (0 for closed form)
  std::vector<double> beta;  // log-gradient, length n*d (if requested)
  long n_evals = 0;
};

// s_n(ybar) = integral of density_n(ybar - x*1) lambda(dx), with optional
// simultaneous logarithmic gradient beta_i = grad_i s_n / s_n sharing the
// same quadrature nodes. n = 0 is rejected (infinite mass at X^0); the
// ExpWeight blow-up model raises DivergenceError from the expanding loop.
ConvResult conv_density(const ClusterProcessModel& model,
                        const ClusterVector& ybar, ConvMethod method,
                        bool want_grad);

// p_n * s_n(ybar) by quadrature (the generic, honest path).
double lambda_star_density(const ClusterProcessModel& model,
                           const ClusterVector& ybar);
ConvResult lambda_star_density_full(const ClusterProcessModel& model,
                                    const ClusterVector& ybar);

// The printed closed form (2pi)^{-(n-1)/2} n^{-1/2} exp{-(|y|^2-(sum y)^2/n)/2}
// for the unit product-Gaussian law over unit Lebesgue centres, d = 1.
double lambda_star_gaussian_closed(const ClusterProcessModel& model,
                                   const ClusterVector& ybar);

// lambda*-mass of the cylinder set X_B = {clusters hitting B}, via the mean
// droplet identity: MC average of lambda(D_B(ybar)) over eta draws.
MCEstimate lambda_star_region_mass(const ClusterProcessModel& model,
                                   const Window& B, long n_draws, Rng& rng);

struct OrthoCheck {
  MCEstimate side_a;   // direct lambda*_n mass of the rotated box
  MCEstimate side_b;   // p_n n^{-1/2} lambda(B1) * P(z' in B')
  double residual = 0.0;
  double combined_se = 0.0;
};

// Verifies the shift/shape factorization of lambda*_n in rotated coordinates
// z = ybar U_n (first column of U_n proportional to the diagonal): the z_1
// marginal is n^{-1/2} lambda, independent of the shape coordinates z'.
// d = 1, translation-invariant lambda only.
OrthoCheck orthogonal_decomposition_check(const ClusterProcessModel& model,
                                          int n, double z1_lo, double z1_hi,
                                          const Window& zprime, long n_draws,
                                          Rng& rng);

}  // namespace pcp
