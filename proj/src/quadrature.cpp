#include "pcp/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "pcp/kernels.hpp"

namespace pcp {

namespace {

std::string format_divergence(const DivergenceReport& r) {
  std::ostringstream os;
  os << "divergent integral";
  if (!r.context.empty()) os << " in " << r.context;
  os << "; truncated estimates:";
  for (std::size_t i = 0; i < r.estimates.size(); ++i)
    os << " [w=" << r.half_widths[i] << "] " << r.estimates[i];
  return os.str();
}

double midpoint_pass(const BatchFn1D& f, double a, double b, long n,
                     long* evals) {
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] = a + (static_cast<double>(i) + 0.5) * h;
  f(xs.data(), ys.data(), xs.size());
  *evals += n;
  return h * kernels::sum(ys.data(), ys.size());
}

}  // namespace

DivergenceError::DivergenceError(DivergenceReport r)
    : std::runtime_error(format_divergence(r)), report_(std::move(r)) {}

QuadResult integrate_grid_1d(const BatchFn1D& f, double a, double b,
                             double abs_tol, int n0, int max_doublings) {
  QuadResult res;
  if (!(b > a)) return res;
  long n = n0;
  double prev = midpoint_pass(f, a, b, n, &res.n_evals);
  for (int level = 0; level < max_doublings; ++level) {
    n *= 2;
    const double cur = midpoint_pass(f, a, b, n, &res.n_evals);
    const double diff = std::fabs(cur - prev);
    prev = cur;
    if (diff <= abs_tol) {
      res.value = cur;
      res.abs_err = diff;
      return res;
    }
  }
  res.value = prev;
  res.abs_err = abs_tol;  // best effort; flagged below
  res.converged = false;
  return res;
}

QuadResult integrate_grid_2d(const BatchFn2D& f, double ax, double bx,
                             double ay, double by, double abs_tol, int n0,
                             int max_doublings) {
  QuadResult res;
  if (!(bx > ax) || !(by > ay)) return res;

  auto pass = [&](long n) {
    const double hx = (bx - ax) / static_cast<double>(n);
    const double hy = (by - ay) / static_cast<double>(n);
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> row(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
      xs[static_cast<std::size_t>(i)] = ax + (static_cast<double>(i) + 0.5) * hx;
    double acc = 0.0;
    for (long j = 0; j < n; ++j) {
      const double y = ay + (static_cast<double>(j) + 0.5) * hy;
      f(xs.data(), y, row.data(), xs.size());
      acc += kernels::sum(row.data(), row.size());
    }
    res.n_evals += n * n;
    return acc * hx * hy;
  };

  long n = n0;
  double prev = pass(n);
  for (int level = 0; level < max_doublings; ++level) {
    n *= 2;
    const double cur = pass(n);
    const double diff = std::fabs(cur - prev);
    prev = cur;
    if (diff <= abs_tol) {
      res.value = cur;
      res.abs_err = diff;
      return res;
    }
  }
  res.value = prev;
  res.abs_err = abs_tol;
  res.converged = false;
  return res;
}

QuadResult integrate_expanding_1d(const BatchFn1D& f, double center, double w0,
                                  double abs_tol, const ExpandSpec& spec,
                                  const std::string& context) {
  DivergenceReport report;
  report.context = context;

  QuadResult res;
  double w = w0;
  auto inner = [&](double a, double b) {
    QuadResult part = integrate_grid_1d(f, a, b, abs_tol * 0.25);
    res.n_evals += part.n_evals;
    res.abs_err += part.abs_err;
    res.converged = res.converged && part.converged;
    return part.value;
  };

  double total = inner(center - w, center + w);
  report.half_widths.push_back(w);
  report.estimates.push_back(total);

  int consecutive_growth = 0;
  for (int k = 0; k < spec.max_doublings; ++k) {
    // Integrate only the two freshly exposed flanks.
    const double flank =
        inner(center - 2.0 * w, center - w) + inner(center + w, center + 2.0 * w);
    w *= 2.0;
    const double prev_total = total;
    total += flank;
    report.half_widths.push_back(w);
    report.estimates.push_back(total);

    const double increment = std::fabs(flank);
    const double growth =
        increment / std::max(std::fabs(prev_total), 1e-300);
    if (growth > spec.growth_threshold)
      ++consecutive_growth;
    else
      consecutive_growth = 0;

    if (consecutive_growth >= spec.divergence_consecutive)
      throw DivergenceError(std::move(report));

    if (increment <= std::max(abs_tol, spec.rel_tol * std::fabs(total))) {
      res.value = total;
      res.abs_err += increment;
      return res;
    }
  }
  // Doubling budget exhausted without settling: treat as divergent rather
  // than return an unreliable number.
  throw DivergenceError(std::move(report));
}

}  // namespace pcp
