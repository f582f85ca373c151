#include "pcp/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcp/kernels.hpp"
#include "pcp/quadrature.hpp"

namespace pcp {

namespace {

void require_nonneg(const SmoothFn& f, const char* who) {
  if (!f.nonnegative())
    throw std::invalid_argument(std::string(who) +
                                ": test function must be nonnegative");
}

// integral over W of (1 - e^{-f}) d lambda, by grid quadrature.
double one_minus_exp_integral(const IntensityModel& lambda, const SmoothFn& f,
                              const Window& W, double abs_tol) {
  if (W.dim == 1) {
    auto g = [&](const double* x, double* out, std::size_t n) {
      for (std::size_t i = 0; i < n; ++i) {
        const double fv = f.value(vec1(x[i]));
        out[i] = lambda.density(vec1(x[i])) * (-std::expm1(-fv));
      }
    };
    return integrate_grid_1d(g, W.lower[0], W.upper[0], abs_tol).value;
  }
  if (W.dim == 2) {
    auto g = [&](const double* x, double y, double* out, std::size_t n) {
      for (std::size_t i = 0; i < n; ++i) {
        const Vec p = vec2(x[i], y);
        out[i] = lambda.density(p) * (-std::expm1(-f.value(p)));
      }
    };
    return integrate_grid_2d(g, W.lower[0], W.upper[0], W.lower[1], W.upper[1],
                             abs_tol)
        .value;
  }
  throw std::invalid_argument(
      "laplace quadrature supports dimensions 1 and 2 only");
}

}  // namespace

double laplace_poisson_closed(const IntensityModel& lambda, const SmoothFn& f) {
  require_nonneg(f, "laplace_poisson_closed");
  if (f.is_zero()) return 1.0;
  if (lambda.dim() != f.dim())
    throw std::invalid_argument(
        "laplace_poisson_closed: dimension mismatch between intensity and f");
  const double I = one_minus_exp_integral(lambda, f, f.support(), 1e-10);
  return std::exp(-I);
}

MCEstimate laplace_mucl_closed(const ClusterProcessModel& model,
                               const SmoothFn& f, Rng& rng, long n_clusters,
                               int nodes_per_dim) {
  require_nonneg(f, "laplace_mucl_closed");
  if (f.dim() != model.dim())
    throw std::invalid_argument(
        "laplace_mucl_closed: dimension mismatch between model and f");
  if (n_clusters < 2)
    throw std::invalid_argument("laplace_mucl_closed: need >= 2 clusters");
  if (f.is_zero()) return {1.0, 0.0, n_clusters, 0.0};

  const IntensityModel& lambda = model.lambda();
  const Window W = f.support().dilate(model.r_trunc());
  const double mass = lambda.mass(W);
  if (!std::isfinite(mass))
    throw DivergenceError(
        {"laplace_mucl_closed outer region mass", {}, {mass}});

  // One shared cluster batch: common random numbers across all nodes and all
  // grid refinements, so the refinement differences see quadrature error only.
  const std::size_t M = static_cast<std::size_t>(n_clusters);
  std::vector<ClusterVector> clusters;
  clusters.reserve(M);
  for (std::size_t j = 0; j < M; ++j) clusters.push_back(model.eta().sample(rng));

  std::vector<double> I(M), s(M), e(M);
  const double quad_tol = model.numerics().quad_abs_tol;
  const int d = model.dim();

  // Per-cluster centre integrals at one grid resolution.
  auto integrate_at = [&](int n_per_dim) {
    std::fill(I.begin(), I.end(), 0.0);
    auto accumulate_node = [&](const Vec& x, double weight) {
      for (std::size_t j = 0; j < M; ++j) {
        const ClusterVector& cl = clusters[j];
        double acc = 0.0;
        for (int i = 0; i < cl.size(); ++i) acc += f.value(cl.point(i) + x);
        s[j] = acc;
      }
      kernels::exp_affine(s.data(), -1.0, 0.0, e.data(), M);
      const double w = weight * lambda.density(x);
      for (std::size_t j = 0; j < M; ++j) I[j] += w * (1.0 - e[j]);
    };
    if (d == 1) {
      const double h = W.side(0) / n_per_dim;
      for (int k = 0; k < n_per_dim; ++k)
        accumulate_node(vec1(W.lower[0] + (k + 0.5) * h), h);
    } else if (d == 2) {
      const double hx = W.side(0) / n_per_dim;
      const double hy = W.side(1) / n_per_dim;
      for (int ky = 0; ky < n_per_dim; ++ky)
        for (int kx = 0; kx < n_per_dim; ++kx)
          accumulate_node(vec2(W.lower[0] + (kx + 0.5) * hx,
                               W.lower[1] + (ky + 0.5) * hy),
                          hx * hy);
    } else {
      throw std::invalid_argument(
          "laplace quadrature supports dimensions 1 and 2 only");
    }
    RunningStat st;
    for (double v : I) st.add(v);
    return st;
  };

  int n_per_dim = nodes_per_dim;
  RunningStat st = integrate_at(n_per_dim);
  double prev_mean = st.mean();
  double quad_diff = std::abs(prev_mean);
  const int max_doublings = (d == 1) ? 7 : 4;
  for (int pass = 0; pass < max_doublings; ++pass) {
    n_per_dim *= 2;
    st = integrate_at(n_per_dim);
    quad_diff = std::abs(st.mean() - prev_mean);
    prev_mean = st.mean();
    if (quad_diff <= std::max(quad_tol, 0.1 * st.se())) break;
  }

  const double value = std::exp(-st.mean());
  MCEstimate out;
  out.value = value;
  out.se = value * st.se();
  out.n = n_clusters;
  // Quadrature refinement residue plus the cluster-truncation scale, both
  // mapped through the exponential.
  out.bias_bound = value * (quad_diff + model.numerics().eps_trunc * mass);
  return out;
}

MCEstimate laplace_empirical(const std::vector<Configuration>& samples,
                             const SmoothFn& f) {
  require_nonneg(f, "laplace_empirical");
  if (samples.empty())
    throw std::invalid_argument("laplace_empirical: no samples");
  RunningStat st;
  for (const Configuration& g : samples) {
    if (!f.is_zero() && !g.window.contains_box(f.support()))
      throw std::invalid_argument(
          "laplace_empirical: sample window does not cover the support of the "
          "test function");
    st.add(std::exp(-pair(f, g)));
  }
  return st.estimate();
}

MCEstimate laplace_lifted_mc(const ClusterProcessModel& model,
                             const SmoothFn& f, long n_draws, Rng& rng) {
  require_nonneg(f, "laplace_lifted_mc");
  if (n_draws < 2)
    throw std::invalid_argument("laplace_lifted_mc: need >= 2 draws");
  if (f.is_zero()) return {1.0, 0.0, n_draws, 0.0};

  // integral over the lifted space of (1 - e^{-f-tilde}) d lambda* with
  // f-tilde(xbar) = sum_i f(x_i): draw centre x ~ lambda|_W, cluster ybar ~
  // eta, weight by lambda(W). Clusters whose points all miss supp f give 0.
  const Window W = f.support().dilate(model.r_trunc());
  const double mass = model.lambda().mass(W);
  if (!std::isfinite(mass))
    throw DivergenceError({"laplace_lifted_mc region mass", {}, {mass}});

  RunningStat st;
  for (long k = 0; k < n_draws; ++k) {
    const Vec x = model.lambda().sample_on(W, rng);
    const ClusterVector ybar = model.eta().sample(rng);
    double acc = 0.0;
    for (int i = 0; i < ybar.size(); ++i) acc += f.value(ybar.point(i) + x);
    st.add(mass * (-std::expm1(-acc)));
  }
  const double value = std::exp(-st.mean());
  return {value, value * st.se(), n_draws,
          value * model.numerics().eps_trunc * mass};
}

}  // namespace pcp
