#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pcp/model.hpp"
#include "pcp/stats.hpp"

namespace pcp {

// Droplet of a cluster: D_B(ybar) = union over points y of (B - y), i.e. the
// set of centres x for which the shifted cluster ybar + x touches B.
struct DropletSet {
  Window base;
  ClusterVector cluster;
  std::vector<Window> boxes;  // B - y_i
  Window bounding_box;
  bool empty = true;

  bool contains(const Vec& x) const;
  int layer_count(const Vec& x) const;  // number of boxes covering x
};

DropletSet make_droplet(const Window& B, const ClusterVector& ybar);

// lambda(D_B(ybar)): exact segment sweep in d=1, inclusion-exclusion for up
// to 3 boxes under Lebesgue, grid quadrature otherwise.
double droplet_measure(const ClusterProcessModel& model, const Window& B,
                       const ClusterVector& ybar);

// lambda-measure of the exact-layer region {x : layer_count(x) = layer}.
double droplet_layer_measure(const ClusterProcessModel& model, const Window& B,
                             const ClusterVector& ybar, int layer);

// MC mean of droplet_measure over eta draws; the local-finiteness criterion.
MCEstimate mean_droplet_mass(const ClusterProcessModel& model, const Window& K,
                             long n_draws, Rng& rng);

enum class Verdict { pass, fail, unknown };
const char* verdict_name(Verdict v);

// Sufficient-condition checklist (metadata-driven; "unknown" is a legitimate
// verdict because these conditions are sufficient, not necessary).
struct SufficiencyReport {
  Verdict uniform_centre_mass = Verdict::unknown;  // sup_x lambda(K+x) finite
  Verdict bounded_cluster = Verdict::unknown;      // bounded in-cluster support
  Verdict non_atomic_intensity = Verdict::unknown;
  Verdict no_fixed_offsets = Verdict::unknown;
  std::string notes;
};

SufficiencyReport check_sufficient(const ClusterProcessModel& model,
                                   const Window& K);

// exp{-E_eta[sum_l (1-q^l) lambda(layer-l region of D_K)]}: the generating
// function of the count in K, via the layer decomposition.
MCEstimate pgf_closed(const ClusterProcessModel& model, const Window& K,
                      double q, long n_draws, Rng& rng);

// Empirical mean of q^{count(gamma, K)}.
MCEstimate pgf_empirical(const std::vector<Configuration>& samples,
                         const Window& K, double q);

struct SimplicityReport {
  long max_multiplicity = 0;  // largest group of tol-coincident points
  long points_scanned = 0;
  std::vector<std::pair<Vec, Vec>> offending;  // up to 8 coincident pairs
};

// Scans lifted samples (pre-projection points, within and across clusters)
// for coincidences closer than tol in max-norm.
SimplicityReport simplicity_scan(const std::vector<LiftedConfiguration>& samples,
                                 double tol);

}  // namespace pcp
