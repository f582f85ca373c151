#pragma once

#include <cstddef>
#include <vector>

namespace pcp {

// Monte Carlo estimate with a standard error. `n` is the replica count that
// produced it; `bias_note` slots hold known systematic error bounds
// (truncation, quadrature) that should be folded into comparisons.
struct MCEstimate {
  double value = 0.0;
  double se = 0.0;
  long n = 0;
  double bias_bound = 0.0;
};

// Streaming mean/variance accumulator (Welford).
class RunningStat {
 public:
  void add(double x);
  long n() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // sample variance (n-1 denominator)
  double sd() const;
  double se() const;  // sd / sqrt(n)
  MCEstimate estimate() const { return {mean(), se(), n(), 0.0}; }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with k degrees of freedom.
double chi_square_sf(double x, double k);

// Standard normal CDF.
double normal_cdf(double x);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins_used = 0;
};

// Goodness-of-fit of observed integer counts against a Poisson(mean) law.
// Bins with expected count below `min_expected` are pooled into their
// neighbours (left edge pools upward, right tail pools downward).
ChiSquareResult chi_square_poisson(const std::vector<long>& observed_counts,
                                   double mean, double min_expected = 5.0);

// Generic chi-square against externally supplied expected bin masses.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected,
                               double min_expected = 5.0);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson correlation coefficient.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pcp
