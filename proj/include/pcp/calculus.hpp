#pragma once

#include <utility>
#include <vector>

#include "pcp/functions.hpp"
#include "pcp/model.hpp"
#include "pcp/stats.hpp"

namespace pcp {

// Per-atom gradient of a cylinder function; atoms with zero gradient (outside
// every inner support) are omitted.
struct AtomGradient {
  int atom_index = 0;
  Vec grad;
};
std::vector<AtomGradient> gamma_gradient(const CylinderFn& F,
                                         const Configuration& g);

// sum over atoms of multiplicity * grad_x F(gamma) . v(x).
double directional_derivative(const CylinderFn& F, const Configuration& g,
                              const VectorField& v);

// Vector logarithmic derivative of s_n at ybar: (beta_1, ..., beta_n) flat,
// length n*d; zero vector when s_n is below the density floor.
std::vector<double> beta_vector(const ClusterProcessModel& model,
                                const ClusterVector& ybar);

// sum_i (beta_i . v(y_i) + div v(y_i)); 0 when no point meets supp v.
double beta_along(const ClusterProcessModel& model, const ClusterVector& ybar,
                  const VectorField& v);

// Lifted-Poisson logarithmic derivative: sum of beta_along over clusters.
double B_pi(const ClusterProcessModel& model, const LiftedConfiguration& gbar,
            const VectorField& v);

// Three-term integration-by-parts residual; expect |residual| <= a few SE.
struct IbpResult {
  double term_grad_f = 0.0;  // E[ g * grad_v f ]  (lifted integrands)
  double term_grad_g = 0.0;  // E[ f * grad_v g ]
  double term_beta = 0.0;    // E[ f * g * B^v ]
  double residual = 0.0;     // sum of the three terms
  double se = 0.0;           // SE of the per-draw residual
  long n = 0;
};

// lambda*-level identity: integral of (f grad_v g + g grad_v f + f g beta^v)
// d lambda* = 0 for lifts f-tilde, g-tilde of base test functions, by MC over
// the centre+cluster representation.
IbpResult ibp_residual_lambda_star(const ClusterProcessModel& model,
                                   const SmoothFn& f, const SmoothFn& g,
                                   const VectorField& v, long n_draws,
                                   Rng& rng);

// Configuration-level identity through the lifted representation:
// E[IG * grad_v IF] + E[IF * grad_v IG] + E[IF IG B_pi] = 0.
IbpResult ibp_residual_mucl(const ClusterProcessModel& model,
                            const CylinderFn& F, const CylinderFn& G,
                            const VectorField& v, long n_draws, Rng& rng);

// V(gamma)_x = sum_i A_i(gamma) v_i(x): cylinder-coefficient vector field.
struct CylinderVectorField {
  std::vector<std::pair<CylinderFn, VectorField>> terms;
};

// General-V identity with B^V = sum_i (A_i B^{v_i} + grad_{v_i} A_i).
IbpResult ibp_general(const ClusterProcessModel& model, const CylinderFn& F,
                      const CylinderFn& G, const CylinderVectorField& V,
                      long n_draws, Rng& rng);

// E over gamma-bar of sum over cluster coordinates of grad(IF) . grad(IG).
MCEstimate dirichlet_form(const ClusterProcessModel& model, const CylinderFn& F,
                          const CylinderFn& G, long n_draws, Rng& rng);

// -(sum over cluster coordinates of Laplacian(IF) + grad(IF) . beta); the
// Dirichlet operator applied to a cylinder function at one lifted state.
double generator_apply(const ClusterProcessModel& model, const CylinderFn& F,
                       const LiftedConfiguration& gbar);

struct DirGenCheck {
  MCEstimate lhs;            // Dirichlet form E(F, G)
  MCEstimate rhs;            // E[ (H F) * IG ]
  double rhs_diffusive = 0.0;  // -Laplacian part of rhs
  double rhs_drift = 0.0;      // -beta.grad part of rhs
  double residual = 0.0;
  double combined_se = 0.0;  // paired SE of per-draw differences
};

// E(F,G) vs E[(HF) IG] on a common gamma-bar stream.
DirGenCheck dirichlet_vs_generator(const ClusterProcessModel& model,
                                   const CylinderFn& F, const CylinderFn& G,
                                   long n_draws, Rng& rng);

}  // namespace pcp
