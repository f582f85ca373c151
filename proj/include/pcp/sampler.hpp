#pragma once

#include <vector>

#include "pcp/model.hpp"

namespace pcp {

// N ~ Poisson(lambda(W)), then N iid points from lambda|_W / lambda(W).
Configuration sample_poisson(const IntensityModel& lambda, const Window& W,
                             Rng& rng);

struct MarkedPair {
  Vec centre;
  ClusterVector cluster;  // already shifted by the centre
};

// Poisson centres on the centre window, each carrying an independent
// eta-cluster translated to its centre (the marked/product construction).
std::vector<MarkedPair> sample_marked(const ClusterProcessModel& model,
                                      const Window& centre_window, Rng& rng);

struct LiftedSample {
  LiftedConfiguration lifted;
  Window enlarged_window;     // K dilated by r_trunc (centre space)
  double trunc_bias_scale = 0.0;  // eps_trunc * lambda(enlarged): bias scale
  long n_candidates = 0;      // clusters drawn before the droplet filter
};

// Lifted Poisson field on the clusters-that-hit-K event: centres sampled on
// K (+) r_trunc, keeping shifted clusters whose projection intersects K.
LiftedSample sample_lifted(const ClusterProcessModel& model, const Window& K,
                           Rng& rng);

// The projected cluster configuration restricted to K.
Configuration sample_mucl(const ClusterProcessModel& model, const Window& K,
                          Rng& rng);

}  // namespace pcp
