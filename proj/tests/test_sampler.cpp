#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcp/sampler.hpp"
#include "pcp/stats.hpp"

using namespace pcp;

namespace {

ClusterProcessModel gaussian_model(std::vector<double> probs) {
  Numerics num;
  return ClusterProcessModel(IntensityModel::lebesgue(1, 1.0),
                             ClusterLaw::product_gaussian(1, probs, 1.0), num,
                             11);
}

ClusterProcessModel delta_model() {
  Numerics num;
  return ClusterProcessModel(
      IntensityModel::lebesgue(1, 1.0),
      ClusterLaw::dirac_offsets(1, {0.0, 1.0}, {{}, {vec1(0.0)}}), num, 11);
}

}  // namespace

TEST_CASE("poisson sampler: counts follow the Poisson law of the mass") {
  IntensityModel lam = IntensityModel::lebesgue(1, 1.5);
  Window W = window1(0.0, 2.0);  // mass 3.0
  Rng rng(101);
  std::vector<long> counts;
  for (int i = 0; i < 20000; ++i)
    counts.push_back(sample_poisson(lam, W, rng).total_points());
  ChiSquareResult chi = chi_square_poisson(counts, 3.0);
  CHECK(chi.p_value > 1e-3);
}

TEST_CASE("poisson sampler: atoms stay in the window, density respected") {
  // exp-weight density e^{|x|} on [0, 1]: more points near 1 than near 0.
  IntensityModel lam = IntensityModel::exp_weight();
  Window W = window1(0.0, 1.0);
  Rng rng(102);
  long lower = 0, upper = 0;
  for (int i = 0; i < 4000; ++i) {
    Configuration g = sample_poisson(lam, W, rng);
    for (int a = 0; a < g.n_atoms(); ++a) {
      REQUIRE(W.contains(g.atom(a)));
      (g.atom(a)[0] < 0.5 ? lower : upper) +=
          g.multiplicity[static_cast<std::size_t>(a)];
    }
  }
  // mass on [0,.5) = e^0.5 - 1 ~ 0.6487, on [.5,1) = e - e^0.5 ~ 1.0696
  const double ratio = static_cast<double>(upper) / static_cast<double>(lower);
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.0);
}

TEST_CASE("poisson sampler refuses non-finite window mass") {
  IntensityModel lam = IntensityModel::exp_weight();
  Rng rng(103);
  CHECK_THROWS_WITH_AS((void)sample_poisson(lam, window1(0.0, 800.0), rng),
                       "sample_poisson: window intensity mass is not finite",
                       std::runtime_error);
}

TEST_CASE("marked pairs: one cluster per centre, centres in the window") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  Window W = window1(-2.0, 2.0);
  Rng rng(104);
  RunningStat count;
  for (int i = 0; i < 5000; ++i) {
    std::vector<MarkedPair> pairs = sample_marked(m, W, rng);
    count.add(static_cast<double>(pairs.size()));
    for (const MarkedPair& p : pairs) {
      REQUIRE(W.contains(p.centre));
      REQUIRE(p.cluster.size() >= 1);
      REQUIRE(p.cluster.size() <= 3);
    }
  }
  // centre count ~ Poisson(4)
  CHECK(std::abs(count.mean() - 4.0) < 4.0 * count.se());
}

TEST_CASE("lifted sampler: droplet filter keeps exactly the clusters hitting K") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  Window K = window1(-0.5, 0.5);
  Rng rng(105);
  for (int i = 0; i < 200; ++i) {
    LiftedSample s = sample_lifted(m, K, rng);
    CHECK(s.enlarged_window.lower[0] ==
          doctest::Approx(K.lower[0] - m.r_trunc()));
    CHECK(s.enlarged_window.upper[0] ==
          doctest::Approx(K.upper[0] + m.r_trunc()));
    CHECK(s.n_candidates >=
          static_cast<long>(s.lifted.clusters.size()));
    for (const ClusterVector& c : s.lifted.clusters) {
      bool hits = false;
      for (int p = 0; p < c.size(); ++p)
        if (K.contains(c.point(p))) hits = true;
      CHECK(hits);
    }
  }
  CHECK(m.r_trunc() > 0.0);
  // truncation bias scale = eps_trunc * lambda(enlarged window)
  LiftedSample s = sample_lifted(m, K, rng);
  CHECK(s.trunc_bias_scale ==
        doctest::Approx(m.numerics().eps_trunc *
                        (1.0 + 2.0 * m.r_trunc())));
}

TEST_CASE("delta clusters collapse the construction to the Poisson process") {
  ClusterProcessModel m = delta_model();
  Window K = window1(0.0, 2.0);
  Rng rng(106);
  std::vector<long> counts;
  for (int i = 0; i < 20000; ++i)
    counts.push_back(count(sample_mucl(m, K, rng), K));
  ChiSquareResult chi = chi_square_poisson(counts, 2.0);
  CHECK(chi.p_value > 1e-3);
}

TEST_CASE("projected intensity: mean count = centre rate x mean cluster size") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  Window K = window1(-1.0, 1.0);
  Rng rng(107);
  RunningStat n_in_K;
  for (int i = 0; i < 20000; ++i)
    n_in_K.add(static_cast<double>(count(sample_mucl(m, K, rng), K)));
  const double mean_size = 0.4 * 1 + 0.35 * 2 + 0.25 * 3;  // 1.85
  const double expect = 2.0 * mean_size;
  // allow the truncation bias on top of the Monte Carlo band
  CHECK(std::abs(n_in_K.mean() - expect) <
        4.0 * n_in_K.se() + 10.0 * m.numerics().eps_trunc);
}

TEST_CASE("sampling is reproducible from the seed") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  Window K = window1(-1.0, 1.0);
  Rng r1(4242), r2(4242);
  for (int i = 0; i < 50; ++i) {
    Configuration a = sample_mucl(m, K, r1);
    Configuration b = sample_mucl(m, K, r2);
    REQUIRE(a.n_atoms() == b.n_atoms());
    for (int k = 0; k < a.n_atoms(); ++k) {
      CHECK(a.atom(k)[0] == b.atom(k)[0]);
      CHECK(a.multiplicity[static_cast<std::size_t>(k)] ==
            b.multiplicity[static_cast<std::size_t>(k)]);
    }
  }
}
