#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcp/properness.hpp"
#include "pcp/sampler.hpp"

using namespace pcp;

namespace {

ClusterProcessModel pair_model() {
  Numerics num;
  return ClusterProcessModel(IntensityModel::lebesgue(1, 1.0),
                             ClusterLaw::product_gaussian(1, {0.0, 0.0, 1.0},
                                                          1.0),
                             num, 13);
}

ClusterProcessModel delta_model() {
  Numerics num;
  return ClusterProcessModel(
      IntensityModel::lebesgue(1, 1.0),
      ClusterLaw::dirac_offsets(1, {0.0, 1.0}, {{}, {vec1(0.0)}}), num, 13);
}

ClusterProcessModel blowup_model() {
  Numerics num;
  return ClusterProcessModel(
      IntensityModel::exp_weight(),
      ClusterLaw::iid_points({0.0, 1.0}, BaseDensity::heavy_tail, 1.0), num,
      13);
}

}  // namespace

TEST_CASE("droplet geometry of a two-point cluster") {
  Window B = window1(0.0, 1.0);
  ClusterVector y = cluster1({0.2, 0.5});
  DropletSet d = make_droplet(B, y);
  REQUIRE(d.boxes.size() == 2);
  CHECK(!d.empty);
  // boxes are B - y_i = [-0.2, 0.8] and [-0.5, 0.5]
  CHECK(d.bounding_box.lower[0] == doctest::Approx(-0.5));
  CHECK(d.bounding_box.upper[0] == doctest::Approx(0.8));
  CHECK(d.contains(vec1(0.0)));
  CHECK(d.layer_count(vec1(0.0)) == 2);   // inside both
  CHECK(d.layer_count(vec1(0.7)) == 1);   // only the first box
  CHECK(d.layer_count(vec1(-0.4)) == 1);  // only the second box
  CHECK(d.layer_count(vec1(0.9)) == 0);
  CHECK(!d.contains(vec1(-0.6)));

  DropletSet empty_d = make_droplet(B, ClusterVector{});
  CHECK(empty_d.empty);
}

TEST_CASE("droplet measures: union sweep and exact layers") {
  ClusterProcessModel m = pair_model();
  Window B = window1(0.0, 1.0);

  // overlapping boxes: union [-0.5, 0.8], layer-2 region [-0.2, 0.5]
  ClusterVector y = cluster1({0.2, 0.5});
  CHECK(droplet_measure(m, B, y) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(droplet_layer_measure(m, B, y, 2) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(droplet_layer_measure(m, B, y, 1) == doctest::Approx(0.6).epsilon(1e-12));

  // disjoint boxes: measures add
  ClusterVector far = cluster1({0.0, 10.0});
  CHECK(droplet_measure(m, B, far) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(droplet_layer_measure(m, B, far, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(droplet_layer_measure(m, B, far, 2) == doctest::Approx(0.0));

  // triple overlap at a point
  ClusterVector triple = cluster1({0.0, 0.0, 0.0});
  CHECK(droplet_measure(m, B, triple) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(droplet_layer_measure(m, B, triple, 3) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean droplet mass matches the closed Gaussian-pair value") {
  // E lambda(D_K) = 2 - erf(1/2) + (2/sqrt(pi))(1 - e^{-1/4}), K = [0,1]
  const double expect = 1.7290967103470212;
  ClusterProcessModel m = pair_model();
  Rng rng(31);
  MCEstimate est = mean_droplet_mass(m, window1(0.0, 1.0), 200000, rng);
  CHECK(std::abs(est.value - expect) < 4.0 * est.se);
  CHECK(est.se < 2e-3);

  // sufficiency bound: mean droplet mass <= sup-translate window mass * mean
  // cluster size (here 1.0 * 2.0)
  CHECK(est.value <= 1.0 * m.eta().mean_size() + 4.0 * est.se);
}

TEST_CASE("mean droplet mass degenerate laws: delta offsets and empty clusters") {
  Rng rng(33);

  // a single deterministic offset sweeps exactly the window: value lambda(K),
  // zero spread
  ClusterProcessModel d = delta_model();
  MCEstimate one = mean_droplet_mass(d, window1(0.0, 1.0), 500, rng);
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.se == doctest::Approx(0.0));

  // all clusters empty: droplet is empty, mass identically zero
  Numerics num;
  ClusterProcessModel void_model(IntensityModel::lebesgue(1, 1.0),
                                 ClusterLaw::product_gaussian(1, {1.0}, 1.0),
                                 num, 13);
  MCEstimate zero = mean_droplet_mass(void_model, window1(0.0, 1.0), 500, rng);
  CHECK(zero.value == 0.0);
  CHECK(zero.se == 0.0);
}

TEST_CASE("sufficiency verdicts per model family") {
  Window K = window1(0.0, 1.0);

  SufficiencyReport g = check_sufficient(pair_model(), K);
  CHECK(g.uniform_centre_mass == Verdict::pass);
  CHECK(g.bounded_cluster == Verdict::unknown);  // Gaussian tails: sufficient
                                                 // condition does not apply
  CHECK(g.non_atomic_intensity == Verdict::pass);
  CHECK(g.no_fixed_offsets == Verdict::pass);

  SufficiencyReport d = check_sufficient(delta_model(), K);
  CHECK(d.bounded_cluster == Verdict::pass);
  CHECK(d.no_fixed_offsets == Verdict::fail);

  SufficiencyReport b = check_sufficient(blowup_model(), K);
  CHECK(b.uniform_centre_mass == Verdict::fail);

  CHECK(std::string(verdict_name(Verdict::pass)) == "pass");
  CHECK(std::string(verdict_name(Verdict::fail)) == "fail");
  CHECK(std::string(verdict_name(Verdict::unknown)) == "unknown");
}

TEST_CASE("generating functional: frozen Gaussian-pair references") {
  // exp{-(2(1-q) - (1-q)^2 E_ov)}, E_ov = erf(1/2) - (2/sqrt(pi))(1-e^{-1/4}),
  // evaluated with 40-digit arithmetic.
  const double expect[3] = {0.28160289109734465, 0.4692331682386835,
                            0.8209517286110761};
  const double qs[3] = {0.3, 0.6, 0.9};
  ClusterProcessModel m = pair_model();
  Window K = window1(0.0, 1.0);
  Rng rng(37);
  for (int i = 0; i < 3; ++i) {
    MCEstimate closed = pgf_closed(m, K, qs[i], 200000, rng);
    CHECK(std::abs(closed.value - expect[i]) < 4.0 * closed.se + 1e-10);
    CHECK(closed.se < 1e-3);
  }
}

TEST_CASE("generating functional: delta clusters give the Poisson formula") {
  // single deterministic point: layer-1 measure is exactly lambda(K), so
  // the functional is exp{-(1-q) lambda(K)} with zero spread.
  ClusterProcessModel m = delta_model();
  Window K = window1(0.0, 2.0);
  Rng rng(41);
  for (double q : {0.3, 0.6, 0.9}) {
    MCEstimate closed = pgf_closed(m, K, q, 100, rng);
    CHECK(closed.value ==
          doctest::Approx(std::exp(-(1.0 - q) * 2.0)).epsilon(1e-12));
    CHECK(closed.se == doctest::Approx(0.0));
  }
}

TEST_CASE("generating functional: closed vs empirical on samples") {
  ClusterProcessModel m = pair_model();
  Window K = window1(0.0, 1.0);
  Rng rng(43);
  std::vector<Configuration> samples;
  for (int i = 0; i < 30000; ++i) samples.push_back(sample_mucl(m, K, rng));
  for (double q : {0.3, 0.6, 0.9}) {
    Rng rng_c(1000 + static_cast<std::uint64_t>(q * 10));
    MCEstimate closed = pgf_closed(m, K, q, 100000, rng_c);
    MCEstimate emp = pgf_empirical(samples, K, q);
    CHECK(std::abs(closed.value - emp.value) <
          4.0 * (closed.se + emp.se) + 1e-6);
  }
}

TEST_CASE("generating functional: boundary behaviour in q") {
  ClusterProcessModel m = pair_model();
  Window K = window1(0.0, 1.0);

  // q -> 1-: every (1 - q^l) weight vanishes, so the closed value tends to 1
  Rng rng(45);
  MCEstimate near_one = pgf_closed(m, K, 1.0 - 1e-6, 500, rng);
  CHECK(near_one.value == doctest::Approx(1.0).epsilon(1e-5));

  // empirical side: q = 1 gives exactly 1 on any sample set, and the empty
  // sample list reports the void value 1 with zero spread
  Rng rng_s(46);
  std::vector<Configuration> samples;
  for (int i = 0; i < 50; ++i) samples.push_back(sample_mucl(m, K, rng_s));
  MCEstimate at_one = pgf_empirical(samples, K, 1.0);
  CHECK(at_one.value == 1.0);
  CHECK(at_one.se == 0.0);

  MCEstimate vacuous = pgf_empirical({}, K, 0.5);
  CHECK(vacuous.value == 1.0);
  CHECK(vacuous.se == 0.0);
  CHECK(vacuous.n == 0);
}

TEST_CASE("generating functional: delta clusters reduce to the Poisson law") {
  // projected process is Poisson(lambda(K)), so the empirical functional must
  // match exp{-(1-q) lambda(K)}
  ClusterProcessModel m = delta_model();
  Window K = window1(0.0, 2.0);
  Rng rng(49);
  std::vector<Configuration> samples;
  for (int i = 0; i < 40000; ++i) samples.push_back(sample_mucl(m, K, rng));
  for (double q : {0.3, 0.6, 0.9}) {
    MCEstimate emp = pgf_empirical(samples, K, q);
    CHECK(std::abs(emp.value - std::exp(-(1.0 - q) * 2.0)) <
          4.0 * emp.se + 1e-9);
  }
}

TEST_CASE("pgf rejects out-of-range q") {
  ClusterProcessModel m = pair_model();
  Rng rng(47);
  CHECK_THROWS_AS((void)pgf_closed(m, window1(0.0, 1.0), 1.0, 10, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pgf_closed(m, window1(0.0, 1.0), -0.1, 10, rng),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS((void)pgf_empirical({}, window1(0.0, 1.0), 0.0),
                       "pgf_empirical: q must lie in (0,1]",
                       std::invalid_argument);
  CHECK_THROWS_AS((void)pgf_empirical({}, window1(0.0, 1.0), 1.5),
                  std::invalid_argument);
}

TEST_CASE("simplicity scan finds planted coincidences and passes clean data") {
  Window w = window1(-5.0, 5.0);

  ClusterVector a = cluster1({0.1, 0.7});
  ClusterVector b = cluster1({-0.4});
  LiftedConfiguration clean = make_lifted(1, w, {a, b});
  SimplicityReport ok = simplicity_scan({clean}, 1e-12);
  CHECK(ok.max_multiplicity == 1);
  CHECK(ok.points_scanned == 3);
  CHECK(ok.offending.empty());

  // plant a cross-cluster coincidence
  ClusterVector c = cluster1({0.7, 2.0});
  LiftedConfiguration dirty = make_lifted(1, w, {a, c});
  SimplicityReport bad = simplicity_scan({dirty}, 1e-12);
  CHECK(bad.max_multiplicity == 2);
  CHECK(!bad.offending.empty());

  // and an in-cluster coincidence
  LiftedConfiguration twin = make_lifted(1, w, {cluster1({1.0, 1.0})});
  SimplicityReport tw = simplicity_scan({twin}, 1e-12);
  CHECK(tw.max_multiplicity == 2);

  // no samples at all: nothing to flag
  SimplicityReport none = simplicity_scan({}, 1e-12);
  CHECK(none.points_scanned == 0);
  CHECK(none.max_multiplicity <= 1);
  CHECK(none.offending.empty());
}

TEST_CASE("samples from the absolutely continuous model are simple") {
  ClusterProcessModel m = pair_model();
  Window K = window1(-1.0, 1.0);
  Rng rng(53);
  std::vector<LiftedConfiguration> lifted;
  for (int i = 0; i < 300; ++i)
    lifted.push_back(sample_lifted(m, K, rng).lifted);
  SimplicityReport rep = simplicity_scan(lifted, 1e-12);
  CHECK(rep.max_multiplicity <= 1);
  CHECK(rep.points_scanned > 0);
}
