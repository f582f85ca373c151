#include "pcp/calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "pcp/lambda_star.hpp"
#include "pcp/sampler.hpp"

namespace pcp {

namespace {

bool cluster_meets(const Window& box, const ClusterVector& ybar) {
  for (int i = 0; i < ybar.size(); ++i)
    if (box.contains(ybar.point(i))) return true;
  return false;
}

// f-tilde(xbar) = sum_i f(x_i) and its diagonal directional derivative.
double lift_value(const SmoothFn& f, const ClusterVector& xbar) {
  double acc = 0.0;
  for (int i = 0; i < xbar.size(); ++i) acc += f.value(xbar.point(i));
  return acc;
}

double lift_directional(const SmoothFn& f, const ClusterVector& xbar,
                        const VectorField& v) {
  double acc = 0.0;
  for (int i = 0; i < xbar.size(); ++i) {
    const Vec p = xbar.point(i);
    if (!v.support().contains(p)) continue;
    acc += dot(f.gradient(p), v.value(p));
  }
  return acc;
}

// Directional derivative from a pre-bound frame (atoms outside supp v or all
// inner supports contribute nothing).
double frame_directional(const CylinderFn::Frame& frame,
                         const Configuration& g, const VectorField& v) {
  double acc = 0.0;
  for (int a = 0; a < g.n_atoms(); ++a) {
    const Vec p = g.atom(a);
    if (!v.support().contains(p)) continue;
    acc += g.multiplicity[static_cast<std::size_t>(a)] *
           dot(frame.grad_at(p), v.value(p));
  }
  return acc;
}

}  // namespace

std::vector<AtomGradient> gamma_gradient(const CylinderFn& F,
                                         const Configuration& g) {
  const CylinderFn::Frame frame = F.bind(g);
  std::vector<AtomGradient> out;
  for (int a = 0; a < g.n_atoms(); ++a) {
    const Vec grad = frame.grad_at(g.atom(a));
    if (norm2(grad) > 0.0) out.push_back({a, grad});
  }
  return out;
}

double directional_derivative(const CylinderFn& F, const Configuration& g,
                              const VectorField& v) {
  if (F.dim() != v.dim())
    throw std::invalid_argument("directional_derivative: dimension mismatch");
  return frame_directional(F.bind(g), g, v);
}

std::vector<double> beta_vector(const ClusterProcessModel& model,
                                const ClusterVector& ybar) {
  const int n = ybar.size();
  if (n == 0) return {};
  ConvResult conv = conv_density(model, ybar, ConvMethod::automatic, true);
  if (conv.s <= model.numerics().density_floor)
    return std::vector<double>(static_cast<std::size_t>(n) * ybar.dim, 0.0);
  return conv.beta;
}

double beta_along(const ClusterProcessModel& model, const ClusterVector& ybar,
                  const VectorField& v) {
  if (ybar.size() == 0) return 0.0;
  if (!cluster_meets(v.support(), ybar)) return 0.0;
  const std::vector<double> beta = beta_vector(model, ybar);
  const int d = ybar.dim;
  double acc = 0.0;
  for (int i = 0; i < ybar.size(); ++i) {
    const Vec p = ybar.point(i);
    if (!v.support().contains(p)) continue;
    const Vec vp = v.value(p);
    for (int c = 0; c < d; ++c) acc += beta[static_cast<std::size_t>(i) * d + c] * vp[c];
    acc += v.divergence(p);
  }
  return acc;
}

double B_pi(const ClusterProcessModel& model, const LiftedConfiguration& gbar,
            const VectorField& v) {
  double acc = 0.0;
  for (const ClusterVector& ybar : gbar.clusters) acc += beta_along(model, ybar, v);
  return acc;
}

IbpResult ibp_residual_lambda_star(const ClusterProcessModel& model,
                                   const SmoothFn& f, const SmoothFn& g,
                                   const VectorField& v, long n_draws,
                                   Rng& rng) {
  if (n_draws < 2)
    throw std::invalid_argument("ibp_residual_lambda_star: need >= 2 draws");
  Window W = box_union(f.support(), g.support());
  W = box_union(W, v.support()).dilate(model.r_trunc());
  const double mass = model.lambda().mass(W);

  RunningStat t1, t2, t3, res;
  for (long k = 0; k < n_draws; ++k) {
    const Vec x = model.lambda().sample_on(W, rng);
    const ClusterVector xbar = shift_cluster(model.eta().sample(rng), x);
    double a = 0.0, b = 0.0, c = 0.0;
    if (xbar.size() > 0) {
      const double fv = lift_value(f, xbar);
      const double gv = lift_value(g, xbar);
      a = mass * gv * lift_directional(f, xbar, v);
      b = mass * fv * lift_directional(g, xbar, v);
      c = (fv == 0.0 || gv == 0.0)
              ? 0.0
              : mass * fv * gv * beta_along(model, xbar, v);
    }
    t1.add(a);
    t2.add(b);
    t3.add(c);
    res.add(a + b + c);
  }
  return {t1.mean(), t2.mean(), t3.mean(), res.mean(), res.se(), n_draws};
}

IbpResult ibp_residual_mucl(const ClusterProcessModel& model,
                            const CylinderFn& F, const CylinderFn& G,
                            const VectorField& v, long n_draws, Rng& rng) {
  if (n_draws < 2)
    throw std::invalid_argument("ibp_residual_mucl: need >= 2 draws");
  Window K = box_union(F.inner_support(), G.inner_support());
  K = box_union(K, v.support());

  RunningStat t1, t2, t3, res;
  for (long k = 0; k < n_draws; ++k) {
    const LiftedSample ls = sample_lifted(model, K, rng);
    const Configuration gamma = project_lifted(ls.lifted);
    const CylinderFn::Frame fF = F.bind(gamma);
    const CylinderFn::Frame fG = G.bind(gamma);
    const double a = fG.value * frame_directional(fF, gamma, v);
    const double b = fF.value * frame_directional(fG, gamma, v);
    const double c = fF.value * fG.value * B_pi(model, ls.lifted, v);
    t1.add(a);
    t2.add(b);
    t3.add(c);
    res.add(a + b + c);
  }
  return {t1.mean(), t2.mean(), t3.mean(), res.mean(), res.se(), n_draws};
}

IbpResult ibp_general(const ClusterProcessModel& model, const CylinderFn& F,
                      const CylinderFn& G, const CylinderVectorField& V,
                      long n_draws, Rng& rng) {
  if (n_draws < 2)
    throw std::invalid_argument("ibp_general: need >= 2 draws");
  if (V.terms.empty()) throw std::invalid_argument("ibp_general: empty field");
  Window K = box_union(F.inner_support(), G.inner_support());
  for (const auto& [A, v] : V.terms) {
    K = box_union(K, A.inner_support());
    K = box_union(K, v.support());
  }

  RunningStat t1, t2, t3, res;
  for (long k = 0; k < n_draws; ++k) {
    const LiftedSample ls = sample_lifted(model, K, rng);
    const Configuration gamma = project_lifted(ls.lifted);
    const CylinderFn::Frame fF = F.bind(gamma);
    const CylinderFn::Frame fG = G.bind(gamma);

    double grad_V_F = 0.0, grad_V_G = 0.0, BV = 0.0;
    for (const auto& [A, v] : V.terms) {
      const CylinderFn::Frame fA = A.bind(gamma);
      grad_V_F += fA.value * frame_directional(fF, gamma, v);
      grad_V_G += fA.value * frame_directional(fG, gamma, v);
      BV += fA.value * B_pi(model, ls.lifted, v) +
            frame_directional(fA, gamma, v);
    }
    const double a = fG.value * grad_V_F;
    const double b = fF.value * grad_V_G;
    const double c = fF.value * fG.value * BV;
    t1.add(a);
    t2.add(b);
    t3.add(c);
    res.add(a + b + c);
  }
  return {t1.mean(), t2.mean(), t3.mean(), res.mean(), res.se(), n_draws};
}

MCEstimate dirichlet_form(const ClusterProcessModel& model, const CylinderFn& F,
                          const CylinderFn& G, long n_draws, Rng& rng) {
  if (n_draws < 2)
    throw std::invalid_argument("dirichlet_form: need >= 2 draws");
  const Window K = box_union(F.inner_support(), G.inner_support());
  RunningStat st;
  for (long k = 0; k < n_draws; ++k) {
    const LiftedSample ls = sample_lifted(model, K, rng);
    const Configuration gamma = project_lifted(ls.lifted);
    const CylinderFn::Frame fF = F.bind(gamma);
    const CylinderFn::Frame fG = G.bind(gamma);
    double acc = 0.0;
    for (const ClusterVector& ybar : ls.lifted.clusters)
      for (int i = 0; i < ybar.size(); ++i) {
        const Vec p = ybar.point(i);
        acc += dot(fF.grad_at(p), fG.grad_at(p));
      }
    st.add(acc);
  }
  return st.estimate();
}

namespace {

// Diffusive and drift halves of (H F)(gamma-bar) before the overall minus.
void generator_terms(const ClusterProcessModel& model, const CylinderFn& F,
                     const LiftedConfiguration& gbar,
                     const CylinderFn::Frame& frame, double* lap_sum,
                     double* drift_sum) {
  *lap_sum = 0.0;
  *drift_sum = 0.0;
  const int d = gbar.dim;
  for (const ClusterVector& ybar : gbar.clusters) {
    if (!cluster_meets(F.inner_support(), ybar)) continue;
    const std::vector<double> beta = beta_vector(model, ybar);
    for (int i = 0; i < ybar.size(); ++i) {
      const Vec p = ybar.point(i);
      *lap_sum += frame.lap_at(p);
      const Vec grad = frame.grad_at(p);
      for (int c = 0; c < d; ++c)
        *drift_sum += grad[c] * beta[static_cast<std::size_t>(i) * d + c];
    }
  }
}

}  // namespace

double generator_apply(const ClusterProcessModel& model, const CylinderFn& F,
                       const LiftedConfiguration& gbar) {
  const CylinderFn::Frame frame = F.bind(project_lifted(gbar));
  double lap = 0.0, drift = 0.0;
  generator_terms(model, F, gbar, frame, &lap, &drift);
  return -(lap + drift);
}

DirGenCheck dirichlet_vs_generator(const ClusterProcessModel& model,
                                   const CylinderFn& F, const CylinderFn& G,
                                   long n_draws, Rng& rng) {
  if (n_draws < 2)
    throw std::invalid_argument("dirichlet_vs_generator: need >= 2 draws");
  const Window K = box_union(F.inner_support(), G.inner_support());

  RunningStat lhs, rhs, diff, diffusive, drift_part;
  for (long k = 0; k < n_draws; ++k) {
    const LiftedSample ls = sample_lifted(model, K, rng);
    const Configuration gamma = project_lifted(ls.lifted);
    const CylinderFn::Frame fF = F.bind(gamma);
    const CylinderFn::Frame fG = G.bind(gamma);

    double e = 0.0;
    for (const ClusterVector& ybar : ls.lifted.clusters)
      for (int i = 0; i < ybar.size(); ++i) {
        const Vec p = ybar.point(i);
        e += dot(fF.grad_at(p), fG.grad_at(p));
      }

    double lap = 0.0, drift = 0.0;
    generator_terms(model, F, ls.lifted, fF, &lap, &drift);
    const double h = -(lap + drift) * fG.value;
    lhs.add(e);
    rhs.add(h);
    diff.add(e - h);
    diffusive.add(-lap * fG.value);
    drift_part.add(-drift * fG.value);
  }
  DirGenCheck out;
  out.lhs = lhs.estimate();
  out.rhs = rhs.estimate();
  out.rhs_diffusive = diffusive.mean();
  out.rhs_drift = drift_part.mean();
  out.residual = std::abs(diff.mean());
  out.combined_se = diff.se();
  return out;
}

}  // namespace pcp
