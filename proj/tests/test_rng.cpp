#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcp/rng.hpp"

using pcp::Rng;

TEST_CASE("same seed reproduces the stream exactly") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(1234), d(1234);
  for (int i = 0; i < 1000; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("splitmix64 reference values") {
  // Values computed from the published finalizer with seed 0 and 1.
  CHECK(pcp::splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(pcp::splitmix64(1) == 0x910A2DEC89025CC1ULL);
}

TEST_CASE("substreams are deterministic and distinct") {
  Rng root(99);
  Rng s1 = root.substream(1);
  Rng s2 = root.substream(2);
  Rng s1_again = Rng(99).substream(1);
  CHECK(s1.next_u64() == s1_again.next_u64());
  Rng t1 = Rng(99).substream(1);
  Rng t2 = Rng(99).substream(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (t1.next_u64() == t2.next_u64()) ++equal;
  CHECK(equal == 0);
  (void)s2;
}

TEST_CASE("uniform lands in [0,1) with the right mean") {
  Rng r(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // SE of the mean is 1/sqrt(12 n) ~ 6.5e-4
  CHECK(std::abs(sum / n - 0.5) < 4e-3);
}

TEST_CASE("uniform(a,b) respects the interval") {
  Rng r(8);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(-3.0, -1.0);
    CHECK(u >= -3.0);
    CHECK(u < -1.0);
  }
}

TEST_CASE("normal moments") {
  Rng r(11);
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(s4 / n - 3.0) < 0.1);
}

static void check_poisson_moments(double mean, std::uint64_t seed) {
  Rng r(seed);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(r.poisson(mean));
    s1 += k;
    s2 += k * k;
  }
  const double m = s1 / n;
  const double var = s2 / n - m * m;
  // Poisson: mean = variance = mean; SE(mean) = sqrt(mean/n)
  const double se = std::sqrt(mean / n);
  CHECK(std::abs(m - mean) < 6.0 * se);
  CHECK(std::abs(var - mean) < 0.03 * mean + 6.0 * se);
}

TEST_CASE("poisson moments, inversion regime") {
  check_poisson_moments(0.3, 21);
  check_poisson_moments(4.5, 22);
  check_poisson_moments(25.0, 23);
}

TEST_CASE("poisson moments, rejection regime") {
  check_poisson_moments(45.0, 24);
  check_poisson_moments(300.0, 25);
}

TEST_CASE("poisson edge cases") {
  Rng r(30);
  CHECK(r.poisson(0.0) == 0);
  CHECK_THROWS_AS((void)r.poisson(-1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)r.poisson(std::nan("")), std::invalid_argument);
}
