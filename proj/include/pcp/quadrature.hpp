#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcp {

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;  // estimated, from grid refinement differences
  long n_evals = 0;
  bool converged = true;
};

// Record of an expanding-domain integration that failed to settle: the
// sequence of truncated estimates and the half-widths that produced them.
struct DivergenceReport {
  std::string context;
  std::vector<double> half_widths;
  std::vector<double> estimates;
};

class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(DivergenceReport r);
  const DivergenceReport& report() const { return report_; }

 private:
  DivergenceReport report_;
};

// Batch integrand: fill out[0..n) with f(x[0..n)). Batching keeps the inner
// loops eligible for the SIMD kernels.
using BatchFn1D = std::function<void(const double* x, double* out,
                                     std::size_t n)>;

// Composite midpoint rule on [a, b], node count doubled until two successive
// grids agree within abs_tol (Richardson-style control; the difference is
// reported as abs_err).
QuadResult integrate_grid_1d(const BatchFn1D& f, double a, double b,
                             double abs_tol, int n0 = 64,
                             int max_doublings = 14);

// Two dimensions, tensor midpoint grid over [ax,bx] x [ay,by] with the same
// refinement control. The integrand receives a row of x values at fixed y.
using BatchFn2D =
    std::function<void(const double* x, double y, double* out, std::size_t n)>;
QuadResult integrate_grid_2d(const BatchFn2D& f, double ax, double bx,
                             double ay, double by, double abs_tol, int n0 = 32,
                             int max_doublings = 7);

// Integration over the whole line for integrands concentrated near `center`:
// start from [center-w0, center+w0] and double the half-width, integrating
// only the new flanks, until the increment falls below tolerance. Declares
// divergence — and throws DivergenceError — when `divergence_consecutive`
// successive doublings each grow the running estimate by more than
// `growth_threshold` (relative), or when the doubling budget is exhausted.
struct ExpandSpec {
  double growth_threshold = 0.10;
  int divergence_consecutive = 4;
  int max_doublings = 24;
  double rel_tol = 1e-12;
};

QuadResult integrate_expanding_1d(const BatchFn1D& f, double center, double w0,
                                  double abs_tol, const ExpandSpec& spec,
                                  const std::string& context);

}  // namespace pcp
