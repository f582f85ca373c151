#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcp/lambda_star.hpp"
#include "pcp/quasiinv.hpp"
#include "pcp/sampler.hpp"

using namespace pcp;

namespace {

ClusterProcessModel gaussian_model(std::vector<double> probs) {
  Numerics num;
  return ClusterProcessModel(IntensityModel::lebesgue(1, 1.0),
                             ClusterLaw::product_gaussian(1, probs, 1.0), num,
                             23);
}

CompactDiffeo small_shift(double eps = 0.1) {
  return CompactDiffeo(SmoothFn::bump(vec1(0.0), 1.0, 1.0), vec1(1.0), eps);
}

}  // namespace

TEST_CASE("density ratio is 1 away from the deformation") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  CompactDiffeo phi = small_shift();
  // cluster entirely outside supp phi = [-1, 1]
  CHECK(rho_lambda_star(m, phi, cluster1({3.0, 4.0})) == 1.0);
  // vacuous cluster
  CHECK(rho_lambda_star(m, phi, ClusterVector{}) == 1.0);
  // base-space version outside the support
  CHECK(rho_poisson(m.lambda(), phi, vec1(2.5)) == 1.0);
}

TEST_CASE("size-one ratio over Lebesgue is the inverse Jacobian at the preimage") {
  // s_1 is constant 1 for unit Lebesgue centres, so the entire ratio is the
  // change-of-variables factor J_phi(phi^{-1}(y))^{-1}; rho_poisson over the
  // same flat intensity must agree exactly.
  ClusterProcessModel m = gaussian_model({0.0, 1.0});
  CompactDiffeo phi = small_shift(0.12);
  for (double y : {-0.8, -0.2, 0.0, 0.35, 0.9}) {
    const Vec pre = phi.inverse(vec1(y));
    const double expect = 1.0 / phi.jacobian(pre);
    CHECK(rho_lambda_star(m, phi, cluster1({y})) ==
          doctest::Approx(expect).epsilon(1e-9));
    CHECK(rho_poisson(m.lambda(), phi, vec1(y)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("inverse composition identity holds to machine precision") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  CompactDiffeo phi = small_shift(0.1);
  CompactDiffeo phi_inv = phi.inverted();
  for (const ClusterVector& x :
       {cluster1({0.2}), cluster1({0.2, -0.5}), cluster1({0.0, 0.4, -0.3})}) {
    ClusterVector y = lift_diffeo(phi, x);
    const double forward = rho_lambda_star(m, phi, y);
    const double backward = rho_lambda_star(m, phi_inv, x);
    CHECK(forward * backward == doctest::Approx(1.0).epsilon(1e-9));
  }
  // base space too
  const Vec x0 = vec1(0.3);
  CHECK(rho_poisson(m.lambda(), phi, phi.apply(x0)) *
            rho_poisson(m.lambda(), phi_inv, x0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ratio reflects the Gaussian density transport for a pair") {
  // For a pair cluster the closed s_2 is available on both sides of the map,
  // so the ratio can be assembled by hand.
  ClusterProcessModel m = gaussian_model({0.0, 0.0, 1.0});
  CompactDiffeo phi = small_shift(0.15);
  const ClusterVector y = cluster1({0.3, -0.4});
  ClusterVector pre = y;
  double jac = 1.0;
  for (int i = 0; i < y.size(); ++i) {
    const Vec p = phi.inverse(y.point(i));
    pre.set_point(i, p);
    jac *= phi.jacobian(p);
  }
  const double s_pre = lambda_star_gaussian_closed(m, pre);
  const double s_y = lambda_star_gaussian_closed(m, y);
  CHECK(rho_lambda_star(m, phi, y) ==
        doctest::Approx(s_pre / (s_y * jac)).epsilon(1e-9));
  CHECK(rho_lambda_star(m, phi, y) > 0.0);
}

TEST_CASE("lifted density: normalization and mean one") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  CompactDiffeo phi = small_shift(0.1);
  Rng rng(29);
  RnDensityLifted R(m, phi, 200000, rng);
  CHECK(std::isfinite(R.norm_integral()));
  CHECK(R.norm_se() < 0.01);

  RunningStat mean;
  Rng rng_draws(31);
  for (int i = 0; i < 20000; ++i) {
    const double r = R(sample_lifted(m, phi.support(), rng_draws).lifted);
    REQUIRE(r > 0.0);
    mean.add(r);
  }
  CHECK(std::abs(mean.mean() - 1.0) <
        4.0 * (mean.se() + std::abs(mean.mean()) * R.norm_se()) + 1e-4);
}

TEST_CASE("configuration-level transport identity") {
  ClusterProcessModel m = gaussian_model({0.0, 0.4, 0.35, 0.25});
  CompactDiffeo phi = small_shift(0.1);
  CylinderFn F({SmoothFn::bump(vec1(0.2), 0.8, 1.0)},
               {CylinderTerm{OuterKind::tanh_s, {1.0}, 0.0, 1.0}});
  Rng rng(37);
  QiResidual res = quasi_invariance_residual(m, phi, F, 30000, rng, 200000);
  CHECK(res.residual <= 4.0 * res.combined_se + 1e-9);
  CHECK(res.lhs.value > 0.0);
  CHECK(res.combined_se < 0.05);
}

TEST_CASE("base-space L2 control experiment") {
  CompactDiffeo phi = small_shift(0.1);
  Rng rng(41);
  L2Check l2 = rn_l2_check(IntensityModel::lebesgue(1, 1.0), phi, 40000, rng);
  CHECK(std::abs(l2.r_mean.value - 1.0) < 4.0 * l2.r_mean.se + 1e-9);
  CHECK(std::abs(l2.r2_mean.value - l2.r2_closed) <
        4.0 * l2.r2_mean.se + l2.closed_abs_err + 1e-9);
  CHECK(l2.r2_closed >= 1.0);  // E[R^2] >= (E[R])^2 = 1
}

TEST_CASE("models without cluster densities are rejected") {
  Numerics num;
  ClusterProcessModel m(
      IntensityModel::lebesgue(1, 1.0),
      ClusterLaw::dirac_offsets(1, {0.0, 1.0}, {{}, {vec1(0.0)}}), num, 23);
  CompactDiffeo phi = small_shift();
  CHECK_THROWS_WITH_AS(
      (void)rho_lambda_star(m, phi, cluster1({0.0})),
      "quasi-invariance density requires a cluster law with densities",
      std::logic_error);
}
