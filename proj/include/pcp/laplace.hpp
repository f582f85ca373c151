#pragma once

#include <vector>

#include "pcp/functions.hpp"
#include "pcp/model.hpp"
#include "pcp/stats.hpp"

namespace pcp {

// exp{-integral of (1 - e^{-f}) d lambda} over supp f. Requires f >= 0.
double laplace_poisson_closed(const IntensityModel& lambda, const SmoothFn& f);

// Cluster-process Laplace functional
//   exp{-integral over x of E_eta[1 - e^{-sum_i f(y_i + x)}] lambda(dx)}
// with the centre integral on (supp f) dilated by r_trunc, the inner
// expectation by MC with one cluster batch shared across all quadrature
// nodes (common random numbers). Returned .se propagates the cluster-MC
// standard error through the exponential; .bias_bound carries the last
// node-doubling difference of the centre quadrature.
MCEstimate laplace_mucl_closed(const ClusterProcessModel& model,
                               const SmoothFn& f, Rng& rng,
                               long n_clusters = 4096, int nodes_per_dim = 64);

// Sample mean of e^{-<f, gamma>}; every sample's window must cover supp f.
MCEstimate laplace_empirical(const std::vector<Configuration>& samples,
                             const SmoothFn& f);

// The lifted-measure form exp{-integral of (1-e^{-f-tilde}) d lambda*},
// estimated by MC over the centre+cluster representation of lambda*.
MCEstimate laplace_lifted_mc(const ClusterProcessModel& model,
                             const SmoothFn& f, long n_draws, Rng& rng);

}  // namespace pcp
