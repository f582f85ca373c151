#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "pcp/lambda_star.hpp"
#include "pcp/sampler.hpp"

using namespace pcp;

namespace {

ClusterProcessModel unit_gaussian_model(std::vector<double> probs,
                                        double quad_tol = 1e-12) {
  Numerics num;
  num.quad_abs_tol = quad_tol;
  return ClusterProcessModel(IntensityModel::lebesgue(1, 1.0),
                             ClusterLaw::product_gaussian(1, probs, 1.0), num,
                             7);
}

}  // namespace

// Reference values computed symbolically from
//   s_n(y) = (2 pi)^{-(n-1)/2} n^{-1/2} exp(-sum_i (y_i - mean)^2 / 2)
// (unit-rate Lebesgue centres, unit product-Gaussian clusters, d = 1) and
// evaluated with 40-digit arithmetic, then rounded to the nearest double.
TEST_CASE("convolution density matches frozen references") {
  ClusterProcessModel m = unit_gaussian_model({0.0, 0.4, 0.35, 0.25});

  struct Case {
    ClusterVector y;
    double expect;
  };
  const Case cases[] = {
      {cluster1({0.0, 0.0}), 0.28209479177387814},    // 1 / (2 sqrt(pi))
      {cluster1({1.0, -1.0}), 0.10377687435514868},
      {cluster1({0.3, -0.2, 0.1}), 0.086249023568753932},
      {cluster1({1.0, 0.0, -1.0}), 0.033803760991572904},
  };
  for (const Case& c : cases) {
    CHECK(lambda_star_gaussian_closed(m, c.y) ==
          doctest::Approx(c.expect).epsilon(1e-15));
    ConvResult closed = conv_density(m, c.y, ConvMethod::gaussian_closed, false);
    CHECK(closed.s == doctest::Approx(c.expect).epsilon(1e-15));
    // the honest quadrature path must land on the same density
    ConvResult quad = conv_density(m, c.y, ConvMethod::quadrature, false);
    CHECK(quad.s == doctest::Approx(c.expect).epsilon(1e-9));
    CHECK(quad.abs_err < 1e-9);
    // `automatic` picks the closed form for this model
    ConvResult autod = conv_density(m, c.y, ConvMethod::automatic, false);
    CHECK(autod.s == doctest::Approx(closed.s).epsilon(1e-15));
  }
}

TEST_CASE("size-one density is the centre intensity convolved: constant 1") {
  // For Lebesgue centres, s_1(y) = integral of h_1(y - x) dx = 1 at every y.
  ClusterProcessModel m = unit_gaussian_model({0.0, 1.0});
  for (double y : {-2.0, 0.0, 1.3}) {
    ConvResult r = conv_density(m, cluster1({y}), ConvMethod::quadrature, false);
    CHECK(r.s == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("full density carries the size probability factor") {
  ClusterProcessModel m = unit_gaussian_model({0.0, 0.4, 0.35, 0.25});
  const ClusterVector y = cluster1({0.4, -0.3});
  const double s = conv_density(m, y, ConvMethod::automatic, false).s;
  CHECK(lambda_star_density(m, y) == doctest::Approx(0.35 * s).epsilon(1e-12));
  ConvResult full = lambda_star_density_full(m, y);
  CHECK(full.s == doctest::Approx(0.35 * s).epsilon(1e-12));
}

TEST_CASE("translation invariance over Lebesgue centres") {
  ClusterProcessModel m = unit_gaussian_model({0.0, 0.4, 0.35, 0.25});
  const double a = conv_density(m, cluster1({0.2, -0.5}), ConvMethod::automatic,
                                false)
                       .s;
  const double b = conv_density(m, cluster1({0.2 + 10.0, -0.5 + 10.0}),
                                ConvMethod::automatic, false)
                       .s;
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("logarithmic gradient: closed form and quadrature agree") {
  ClusterProcessModel m = unit_gaussian_model({0.0, 0.4, 0.35, 0.25});
  const ClusterVector y = cluster1({1.0, -1.0});
  ConvResult closed = conv_density(m, y, ConvMethod::gaussian_closed, true);
  REQUIRE(closed.beta.size() == 2);
  // beta_i = (mean - y_i) / sigma^2 = -y_i here (mean 0, sigma 1)
  CHECK(closed.beta[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(closed.beta[1] == doctest::Approx(1.0).epsilon(1e-12));
  ConvResult quad = conv_density(m, y, ConvMethod::quadrature, true);
  REQUIRE(quad.beta.size() == 2);
  CHECK(quad.beta[0] == doctest::Approx(closed.beta[0]).epsilon(1e-7));
  CHECK(quad.beta[1] == doctest::Approx(closed.beta[1]).epsilon(1e-7));
}

TEST_CASE("vacuous clusters carry infinite mass and are rejected") {
  ClusterProcessModel m = unit_gaussian_model({0.0, 1.0});
  ClusterVector empty;
  CHECK_THROWS_WITH_AS((void)conv_density(m, empty, ConvMethod::automatic,
                                          false),
                       "lambda_star mass at X⁰ is infinite",
                       std::runtime_error);
  CHECK_THROWS_WITH_AS((void)lambda_star_gaussian_closed(m, empty),
                       "lambda_star mass at X⁰ is infinite",
                       std::runtime_error);
}

TEST_CASE("cluster laws without densities are rejected") {
  Numerics num;
  ClusterProcessModel m(
      IntensityModel::lebesgue(1, 1.0),
      ClusterLaw::dirac_offsets(1, {0.0, 1.0}, {{}, {vec1(0.0)}}), num, 7);
  CHECK_THROWS_WITH_AS((void)lambda_star_density(m, cluster1({0.0})),
                       "lambda_star density requires a cluster law with "
                       "densities",
                       std::logic_error);
}

TEST_CASE("printed closed form rejects models outside its contract") {
  Numerics num;
  ClusterProcessModel scaled(IntensityModel::lebesgue(1, 2.0),
                             ClusterLaw::product_gaussian(1, {0.0, 1.0}, 1.0),
                             num, 7);
  CHECK_THROWS_WITH_AS((void)lambda_star_gaussian_closed(scaled,
                                                         cluster1({0.0})),
                       "printed closed form needs unit Lebesgue centres and "
                       "unit product-Gaussian clusters in d=1",
                       std::invalid_argument);
}

TEST_CASE("three-dimensional quadrature is out of scope and says so") {
  Numerics num;
  ClusterProcessModel m(IntensityModel::lebesgue(3, 1.0),
                        ClusterLaw::product_gaussian(3, {0.0, 1.0}, 1.0), num,
                        7);
  ClusterVector y;
  y.dim = 3;
  y.push_point(vec3(0.0, 0.0, 0.0));
  CHECK_THROWS_WITH_AS((void)conv_density(m, y, ConvMethod::quadrature, false),
                       "quadrature convolution not supported for d=3",
                       std::runtime_error);
}

TEST_CASE("region mass via the droplet identity: deterministic control") {
  // One deterministic point at the centre offset 0: the region mass of the
  // clusters hitting B is exactly lambda(B), with zero Monte Carlo spread.
  Numerics num;
  ClusterProcessModel m(
      IntensityModel::lebesgue(1, 1.0),
      ClusterLaw::dirac_offsets(1, {0.0, 1.0}, {{}, {vec1(0.0)}}), num, 7);
  Rng rng(5);
  MCEstimate mass = lambda_star_region_mass(m, window1(0.0, 2.5), 200, rng);
  CHECK(mass.value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(mass.se == doctest::Approx(0.0));
}

TEST_CASE("region mass for Gaussian pairs matches the closed droplet mean") {
  // E lambda(D_K) = 2 - E max(0, 1-|u|), u ~ N(0,2), K = [0,1]:
  // 2 - erf(1/2) + (2/sqrt(pi))(1 - e^{-1/4}) = 1.7290967103470212.
  ClusterProcessModel m = unit_gaussian_model({0.0, 0.0, 1.0});
  Rng rng(17);
  MCEstimate mass =
      lambda_star_region_mass(m, window1(0.0, 1.0), 200000, rng);
  CHECK(std::abs(mass.value - 1.7290967103470212) < 4.0 * mass.se);
  CHECK(mass.se < 2e-3);
}

TEST_CASE("orthogonal decomposition: diagonal shift times shape law") {
  ClusterProcessModel m = unit_gaussian_model({0.0, 0.4, 0.35, 0.25}, 1e-10);
  Rng rng(23);
  OrthoCheck chk = orthogonal_decomposition_check(
      m, 2, -0.7, 0.9, window1(-0.8, 0.8), 200000, rng);
  CHECK(chk.residual <= 4.0 * chk.combined_se + 1e-12);
  CHECK(chk.side_a.value > 0.0);
  CHECK(chk.side_b.value > 0.0);
}

TEST_CASE("exponential-weight intensity mass is the closed integral") {
  IntensityModel ew = IntensityModel::exp_weight();
  // density e^{|x|}: mass over [-1, 2] = (e - 1) + (e^2 - 1)
  const double expect = (std::exp(1.0) - 1.0) + (std::exp(2.0) - 1.0);
  CHECK(ew.mass(window1(-1.0, 2.0)) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(ew.mass(window1(0.0, 1.0)) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  IntensityModel flat = IntensityModel::lebesgue(2, 1.5);
  CHECK(flat.mass(window2(0.0, 2.0, 0.0, 3.0)) == doctest::Approx(9.0));
}
