#include "pcp/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace pcp {

Configuration sample_poisson(const IntensityModel& lambda, const Window& W,
                             Rng& rng) {
  const double mass = lambda.mass(W);
  if (!std::isfinite(mass))
    throw std::runtime_error(
        "sample_poisson: window intensity mass is not finite");
  const long n = rng.poisson(mass);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) pts.push_back(lambda.sample_on(W, rng));
  Window w = W;
  return make_configuration(lambda.dim(), w, pts);
}

std::vector<MarkedPair> sample_marked(const ClusterProcessModel& model,
                                      const Window& centre_window, Rng& rng) {
  const Configuration centres =
      sample_poisson(model.lambda(), centre_window, rng);
  std::vector<MarkedPair> out;
  out.reserve(static_cast<std::size_t>(centres.total_points()));
  for (int i = 0; i < centres.n_atoms(); ++i) {
    const Vec x = centres.atom(i);
    for (int m = 0; m < centres.multiplicity[static_cast<std::size_t>(i)];
         ++m) {
      MarkedPair p;
      p.centre = x;
      p.cluster = shift_cluster(model.eta().sample(rng), x);
      out.push_back(std::move(p));
    }
  }
  return out;
}

LiftedSample sample_lifted(const ClusterProcessModel& model, const Window& K,
                           Rng& rng) {
  LiftedSample s;
  s.enlarged_window = K.dilate(model.r_trunc());
  const double enlarged_mass = model.lambda().mass(s.enlarged_window);
  if (!std::isfinite(enlarged_mass))
    throw std::runtime_error(
        "sample_lifted: enlarged window intensity mass is not finite");
  s.trunc_bias_scale = model.numerics().eps_trunc * enlarged_mass;

  std::vector<MarkedPair> pairs = sample_marked(model, s.enlarged_window, rng);
  s.n_candidates = static_cast<long>(pairs.size());
  std::vector<ClusterVector> kept;
  for (MarkedPair& p : pairs) {
    bool hits = false;
    for (int i = 0; i < p.cluster.size() && !hits; ++i)
      if (K.contains(p.cluster.point(i))) hits = true;
    if (hits) kept.push_back(std::move(p.cluster));
  }
  s.lifted = make_lifted(model.dim(), K, std::move(kept));
  return s;
}

Configuration sample_mucl(const ClusterProcessModel& model, const Window& K,
                          Rng& rng) {
  const LiftedSample s = sample_lifted(model, K, rng);
  return restrict_to_window(project_lifted(s.lifted), K);
}

}  // namespace pcp
