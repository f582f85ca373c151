#pragma once

#include <cstdint>
#include <random>

namespace pcp {

// Deterministic random stream. All transforms (uniform, normal, Poisson) are
// implemented here rather than taken from <random>'s distribution classes,
// because the standard pins the engine's bit stream but not the distributions;
// this keeps results reproducible across compilers and platforms for a fixed
// seed. Poisson counts use CDF inversion below mean 30 and transformed
// rejection (PTRS) above, which is the documented algorithm choice.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform double in [a, b).
  double uniform(double a, double b);
  // Standard normal via Marsaglia's polar method (pair-cached).
  double normal();
  // Poisson count with the given mean (>= 0).
  long poisson(double mean);

  // Independent child stream derived from (root seed, index); used to give
  // Monte Carlo replicas/chunks their own streams so parallel schedules do
  // not change results.
  Rng substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;

  long poisson_inversion(double mean);
  long poisson_ptrs(double mean);
};

// SplitMix64 mixing step; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pcp
