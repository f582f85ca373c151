#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcp/kernels.hpp"
#include "pcp/rng.hpp"

using namespace pcp;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -3.0,
                               double hi = 3.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  Rng rng(5150);
  for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(3),
                        std::size_t(4), std::size_t(17), std::size_t(64),
                        std::size_t(67)}) {
    std::vector<double> x = random_vec(n, rng), y = random_vec(n, rng);
    double s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += x[i];
      d += x[i] * y[i];
    }
    CHECK(kernels::scalar::sum(x.data(), n) == doctest::Approx(s).epsilon(1e-14));
    CHECK(kernels::scalar::dot(x.data(), y.data(), n) ==
          doctest::Approx(d).epsilon(1e-14));

    std::vector<double> out(n, -1.0);
    kernels::scalar::exp_affine(x.data(), 0.7, -0.2, out.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(out[i] == doctest::Approx(std::exp(0.7 * x[i] - 0.2)).epsilon(1e-14));

    double one = 0.0;
    for (std::size_t i = 0; i < n; ++i) one += y[i] * (1.0 - std::exp(-x[i]));
    CHECK(kernels::scalar::sum_one_minus_exp_neg(x.data(), y.data(), n) ==
          doctest::Approx(one).epsilon(1e-13));
    double one_u = 0.0;
    for (std::size_t i = 0; i < n; ++i) one_u += 1.0 - std::exp(-x[i]);
    CHECK(kernels::scalar::sum_one_minus_exp_neg(x.data(), nullptr, n) ==
          doctest::Approx(one_u).epsilon(1e-13));

    std::vector<double> acc(n, 0.5);
    kernels::scalar::sq_dist_accum(x.data(), 1.3, acc.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(acc[i] ==
            doctest::Approx(0.5 + (x[i] - 1.3) * (x[i] - 1.3)).epsilon(1e-14));

    std::vector<double> pos = x, drift = random_vec(n, rng),
                        noise = random_vec(n, rng);
    kernels::scalar::em_update(pos.data(), drift.data(), noise.data(), 0.01,
                               0.14142, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(pos[i] ==
            doctest::Approx(x[i] + drift[i] * 0.01 + 0.14142 * noise[i])
                .epsilon(1e-14));
  }
}

TEST_CASE("exp_affine flushes deep underflow to zero") {
  double t[3] = {-2000.0, 0.0, -710.0};
  double out[3];
  kernels::scalar::exp_affine(t, 1.0, 0.0, out, 3);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 1.0);
  CHECK(out[2] == 0.0);
#if defined(__x86_64__) || defined(_M_X64)
  if (kernels::avx2::available()) {
    double t4[4] = {-2000.0, 0.0, -710.0, 1.0};
    double out4[4];
    kernels::avx2::exp_affine(t4, 1.0, 0.0, out4, 4);
    CHECK(out4[0] == 0.0);
    CHECK(out4[2] == 0.0);
    CHECK(out4[3] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  }
#endif
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 backend agrees with the scalar reference") {
  if (!kernels::avx2::available()) return;
  Rng rng(6174);
  for (std::size_t n = 0; n <= 67; ++n) {
    std::vector<double> x = random_vec(n, rng), y = random_vec(n, rng);
    CHECK(kernels::avx2::sum(x.data(), n) ==
          doctest::Approx(kernels::scalar::sum(x.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::dot(x.data(), y.data(), n) ==
          doctest::Approx(kernels::scalar::dot(x.data(), y.data(), n))
              .epsilon(1e-12));
    std::vector<double> oa(n), os(n);
    kernels::avx2::exp_affine(x.data(), -1.1, 0.4, oa.data(), n);
    kernels::scalar::exp_affine(x.data(), -1.1, 0.4, os.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(oa[i] == doctest::Approx(os[i]).epsilon(2e-13));
    CHECK(kernels::avx2::sum_one_minus_exp_neg(x.data(), y.data(), n) ==
          doctest::Approx(
              kernels::scalar::sum_one_minus_exp_neg(x.data(), y.data(), n))
              .epsilon(2e-12));
    std::vector<double> aa(n, 0.25), as(n, 0.25);
    kernels::avx2::sq_dist_accum(x.data(), -0.7, aa.data(), n);
    kernels::scalar::sq_dist_accum(x.data(), -0.7, as.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(aa[i] == doctest::Approx(as[i]).epsilon(1e-13));
    std::vector<double> pa = x, ps = x, dr = random_vec(n, rng),
                        nz = random_vec(n, rng);
    kernels::avx2::em_update(pa.data(), dr.data(), nz.data(), 0.002, 0.0632, n);
    kernels::scalar::em_update(ps.data(), dr.data(), nz.data(), 0.002, 0.0632,
                               n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(pa[i] == doctest::Approx(ps[i]).epsilon(1e-14));
  }
}
#endif

TEST_CASE("backend selection is switchable and reported") {
  const kernels::Backend initial = kernels::active_backend();
  CHECK((std::string(kernels::backend_name(initial)) == "scalar" ||
         std::string(kernels::backend_name(initial)) == "avx2"));
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  double x[5] = {1, 2, 3, 4, 5};
  CHECK(kernels::sum(x, 5) == doctest::Approx(15.0));
#if defined(__x86_64__) || defined(_M_X64)
  if (kernels::avx2::available()) {
    kernels::set_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == kernels::Backend::avx2);
    CHECK(kernels::sum(x, 5) == doctest::Approx(15.0));
    CHECK(kernels::dot(x, x, 5) == doctest::Approx(55.0));
  }
#endif
  kernels::set_backend(initial);
}
