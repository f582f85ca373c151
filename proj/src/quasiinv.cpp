#include "pcp/quasiinv.hpp"

#include <cmath>
#include <stdexcept>

#include "pcp/lambda_star.hpp"
#include "pcp/quadrature.hpp"
#include "pcp/sampler.hpp"

namespace pcp {

namespace {

bool cluster_meets(const Window& box, const ClusterVector& ybar) {
  for (int i = 0; i < ybar.size(); ++i)
    if (box.contains(ybar.point(i))) return true;
  return false;
}

void require_ac(const ClusterProcessModel& model) {
  if (!model.absolutely_continuous())
    throw std::logic_error(
        "quasi-invariance density requires a cluster law with densities");
}

}  // namespace

double rho_lambda_star(const ClusterProcessModel& model,
                       const CompactDiffeo& phi, const ClusterVector& ybar) {
  require_ac(model);
  if (ybar.dim != model.dim() || phi.dim() != model.dim())
    throw std::invalid_argument("rho_lambda_star: dimension mismatch");
  const int n = ybar.size();
  if (n == 0) return 1.0;
  if (!cluster_meets(phi.support(), ybar)) return 1.0;  // phi acts as identity

  ClusterVector pre = ybar;
  double jac_inv = 1.0;
  for (int i = 0; i < n; ++i) {
    const Vec xi = phi.inverse(ybar.point(i));
    pre.set_point(i, xi);
    jac_inv /= phi.jacobian(xi);
  }

  const double floor = model.numerics().density_floor;
  const double s_y = conv_density(model, ybar, ConvMethod::automatic, false).s;
  const double s_pre = conv_density(model, pre, ConvMethod::automatic, false).s;
  // Below the density floor the ratio is declared 1: such cluster vectors
  // carry no lambda*-mass, so the convention never affects integrals.
  if (s_y <= floor || s_pre <= floor) return 1.0;
  return (s_pre / s_y) * jac_inv;
}

double rho_poisson(const IntensityModel& lambda, const CompactDiffeo& phi,
                   const Vec& x) {
  if (!phi.support().contains(x)) return 1.0;
  const Vec pre = phi.inverse(x);
  const double den = lambda.density(x);
  if (den <= 0.0) return 1.0;
  return lambda.density(pre) / (den * phi.jacobian(pre));
}

RnDensityLifted::RnDensityLifted(const ClusterProcessModel& model,
                                 CompactDiffeo phi, long norm_draws, Rng& rng)
    : model_(&model), phi_(std::move(phi)) {
  require_ac(model);
  if (norm_draws < 2)
    throw std::invalid_argument("RnDensityLifted: need >= 2 draws");
  // integral of (1 - rho) over cluster vectors meeting supp phi, in the
  // centre+cluster representation of lambda*: centres beyond r_trunc of the
  // support contribute only through the eps_trunc cluster tail.
  const Window W = phi_.support().dilate(model.r_trunc());
  const double mass = model.lambda().mass(W);
  if (!std::isfinite(mass))
    throw DivergenceError({"rn normalization region mass", {}, {mass}});
  RunningStat st;
  for (long k = 0; k < norm_draws; ++k) {
    const Vec x = model.lambda().sample_on(W, rng);
    ClusterVector ybar = model.eta().sample(rng);
    ybar = shift_cluster(ybar, x);
    double v = 0.0;
    if (cluster_meets(phi_.support(), ybar))
      v = mass * (1.0 - rho_lambda_star(model, phi_, ybar));
    st.add(v);
  }
  norm_integral_ = st.mean();
  norm_se_ = st.se();
}

double RnDensityLifted::operator()(const LiftedConfiguration& gbar) const {
  double log_prod = 0.0;
  for (const ClusterVector& ybar : gbar.clusters) {
    if (!cluster_meets(phi_.support(), ybar)) continue;
    log_prod += std::log(rho_lambda_star(*model_, phi_, ybar));
  }
  return std::exp(norm_integral_ + log_prod);
}

QiResidual quasi_invariance_residual(const ClusterProcessModel& model,
                                     const CompactDiffeo& phi,
                                     const CylinderFn& F, long n_draws,
                                     Rng& rng, long norm_draws) {
  if (n_draws < 2)
    throw std::invalid_argument("quasi_invariance_residual: need >= 2 draws");
  const RnDensityLifted R(model, phi, norm_draws, rng);
  const Window K = box_union(F.inner_support(), phi.support());

  RunningStat lhs, rhs, diff;
  for (long k = 0; k < n_draws; ++k) {
    const LiftedSample ls = sample_lifted(model, K, rng);
    const Configuration gamma = project_lifted(ls.lifted);
    const double a = F.eval(apply_diffeo_config(phi, gamma));
    const double b = F.eval(gamma) * R(ls.lifted);
    lhs.add(a);
    rhs.add(b);
    diff.add(a - b);
  }
  QiResidual out;
  out.lhs = lhs.estimate();
  out.rhs = rhs.estimate();
  out.residual = std::abs(diff.mean());
  out.paired_se = diff.se();
  // The cached normalization constant multiplies every rhs draw through the
  // exponential, so its SE enters as a relative error on the rhs mean.
  out.combined_se = diff.se() + std::abs(rhs.mean()) * R.norm_se();
  return out;
}

L2Check rn_l2_check(const IntensityModel& lambda, const CompactDiffeo& phi,
                    long n_draws, Rng& rng) {
  if (n_draws < 2)
    throw std::invalid_argument("rn_l2_check: need >= 2 draws");
  if (lambda.dim() != phi.dim())
    throw std::invalid_argument("rn_l2_check: dimension mismatch");
  const Window S = phi.support();

  // Quadrature of the two closed-form exponents over supp phi (rho == 1 and
  // both integrands vanish outside).
  double norm_exponent = 0.0;   // integral of (1 - rho) d lambda
  double l2_exponent = 0.0;     // integral of (rho^2 - rho) d lambda
  double closed_err = 0.0;
  if (S.dim == 1) {
    auto run = [&](auto&& h) {
      auto g = [&](const double* x, double* out, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
          const Vec p = vec1(x[i]);
          out[i] = h(rho_poisson(lambda, phi, p)) * lambda.density(p);
        }
      };
      return integrate_grid_1d(g, S.lower[0], S.upper[0], 1e-10);
    };
    const QuadResult qn = run([](double r) { return 1.0 - r; });
    const QuadResult q2 = run([](double r) { return r * r - r; });
    norm_exponent = qn.value;
    l2_exponent = q2.value;
    closed_err = qn.abs_err + q2.abs_err;
  } else if (S.dim == 2) {
    auto run = [&](auto&& h) {
      auto g = [&](const double* x, double y, double* out, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
          const Vec p = vec2(x[i], y);
          out[i] = h(rho_poisson(lambda, phi, p)) * lambda.density(p);
        }
      };
      return integrate_grid_2d(g, S.lower[0], S.upper[0], S.lower[1],
                               S.upper[1], 1e-9);
    };
    const QuadResult qn = run([](double r) { return 1.0 - r; });
    const QuadResult q2 = run([](double r) { return r * r - r; });
    norm_exponent = qn.value;
    l2_exponent = q2.value;
    closed_err = qn.abs_err + q2.abs_err;
  } else {
    throw std::invalid_argument("rn_l2_check supports dimensions 1 and 2");
  }

  RunningStat r_stat, r2_stat;
  for (long k = 0; k < n_draws; ++k) {
    const Configuration g = sample_poisson(lambda, S, rng);
    double log_prod = 0.0;
    for (int a = 0; a < g.n_atoms(); ++a) {
      const double r = rho_poisson(lambda, phi, g.atom(a));
      log_prod += g.multiplicity[static_cast<std::size_t>(a)] * std::log(r);
    }
    const double R = std::exp(norm_exponent + log_prod);
    r_stat.add(R);
    r2_stat.add(R * R);
  }

  L2Check out;
  out.r_mean = r_stat.estimate();
  out.r2_mean = r2_stat.estimate();
  out.r2_closed = std::exp(l2_exponent);
  out.closed_abs_err = closed_err;
  return out;
}

}  // namespace pcp
