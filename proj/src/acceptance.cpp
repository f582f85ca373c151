#include "pcp/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pcp/calculus.hpp"
#include "pcp/config.hpp"
#include "pcp/dynamics.hpp"
#include "pcp/lambda_star.hpp"
#include "pcp/laplace.hpp"
#include "pcp/properness.hpp"
#include "pcp/quadrature.hpp"
#include "pcp/quasiinv.hpp"
#include "pcp/runner.hpp"
#include "pcp/sampler.hpp"

namespace pcp {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool within(double a, double b, double band) { return std::abs(a - b) <= band; }

// --- shared catalog ---------------------------------------------------------

Numerics default_numerics() { return Numerics{}; }

ClusterProcessModel gaussian_model(std::uint64_t seed, double quad_tol = 1e-8) {
  Numerics num = default_numerics();
  num.quad_abs_tol = quad_tol;
  return ClusterProcessModel(IntensityModel::lebesgue(1, 1.0),
                             ClusterLaw::product_gaussian(
                                 1, {0.0, 0.4, 0.35, 0.25}, 1.0),
                             num, seed);
}

ClusterProcessModel pair_model(std::uint64_t seed) {
  return ClusterProcessModel(IntensityModel::lebesgue(1, 1.0),
                             ClusterLaw::product_gaussian(1, {0.0, 0.0, 1.0},
                                                          1.0),
                             default_numerics(), seed);
}

ClusterProcessModel blowup_model(std::uint64_t seed) {
  return ClusterProcessModel(IntensityModel::exp_weight(),
                             ClusterLaw::iid_points({0.0, 1.0},
                                                    BaseDensity::heavy_tail,
                                                    1.0),
                             default_numerics(), seed);
}

std::vector<SmoothFn> bump_catalog() {
  return {SmoothFn::bump(vec1(0.0), 1.0, 1.0),
          SmoothFn::bump(vec1(0.5), 0.8, 0.7),
          SmoothFn::bump(vec1(-0.7), 1.2, 0.4),
          SmoothFn::plateau(window1(-1.0, 1.0), 0.25, 0.6931471805599453),
          SmoothFn::sum(SmoothFn::bump(vec1(0.0), 1.0, 1.0),
                        SmoothFn::bump(vec1(1.2), 0.6, 0.3))};
}

CylinderFn make_F1() {
  CylinderTerm t;
  t.kind = OuterKind::tanh_s;
  t.a = {1.0};
  t.b = 0.0;
  t.c = 1.0;
  return CylinderFn({SmoothFn::bump(vec1(0.0), 1.0, 1.0)}, {t});
}

CylinderFn make_F2() {
  CylinderTerm t1;
  t1.kind = OuterKind::gauss;
  t1.a = {0.7, -0.4};
  t1.b = 0.2;
  t1.c = 0.8;
  CylinderTerm t2;
  t2.kind = OuterKind::sine;
  t2.a = {0.3, 0.5};
  t2.b = 0.0;
  t2.c = 0.3;
  return CylinderFn({SmoothFn::bump(vec1(0.0), 1.0, 1.0),
                     SmoothFn::bump(vec1(0.5), 0.8, 0.7)},
                    {t1, t2});
}

CylinderFn make_G1() {
  CylinderTerm t;
  t.kind = OuterKind::sine;
  t.a = {1.0};
  t.b = 0.3;
  t.c = 1.0;
  return CylinderFn({SmoothFn::bump(vec1(0.5), 0.8, 0.7)}, {t});
}

CylinderFn make_G2() {
  CylinderTerm t;
  t.kind = OuterKind::tanh_poly;
  t.a = {0.8};
  t.b = 0.0;
  t.c = 0.7;
  return CylinderFn({SmoothFn::bump(vec1(-0.7), 1.2, 0.4)}, {t});
}

VectorField make_v1() {
  return VectorField({SmoothFn::bump(vec1(0.0), 1.0, 0.5)});
}

VectorField make_v2() {
  return VectorField({SmoothFn::plateau(window1(-0.9, 0.9), 0.3, 0.4)});
}

CompactDiffeo make_phi(double center, double radius, double eps) {
  return CompactDiffeo(SmoothFn::bump(vec1(center), radius, 1.0), vec1(1.0),
                       eps);
}

struct SliceStats {
  double mean = 0.0, se = 0.0, var = 0.0, var_se = 0.0;
};

SliceStats slice_stats(const std::vector<double>& xs) {
  RunningStat st;
  for (double x : xs) st.add(x);
  SliceStats s;
  s.mean = st.mean();
  s.se = st.se();
  s.var = st.variance();
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - s.mean, 4.0);
  m4 /= static_cast<double>(xs.size());
  s.var_se = std::sqrt(std::max(m4 - s.var * s.var, 0.0) /
                       static_cast<double>(xs.size()));
  return s;
}

// --- criteria ----------------------------------------------------------------

CriterionResult c1_poisson_counts(std::uint64_t seed, long N) {
  const IntensityModel lam = IntensityModel::lebesgue(1, 1.0);
  const Window W = window1(0.0, 2.0);
  const Window W1 = window1(0.0, 1.0), W2 = window1(1.0, 2.0);
  Rng rng(seed);
  std::vector<long> counts;
  std::vector<double> c_left, c_right;
  counts.reserve(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k) {
    const Configuration g = sample_poisson(lam, W, rng);
    counts.push_back(g.total_points());
    c_left.push_back(static_cast<double>(count(g, W1)));
    c_right.push_back(static_cast<double>(count(g, W2)));
  }
  const ChiSquareResult chi = chi_square_poisson(counts, 2.0);
  const double corr = correlation(c_left, c_right);
  const double corr_band = 3.0 / std::sqrt(static_cast<double>(N));
  const bool pass = chi.p_value > 0.01 && std::abs(corr) <= corr_band;
  return {1, "poisson-count-law", pass,
          "chi2 p=" + num(chi.p_value) + " subwindow corr=" + num(corr) +
              " band=" + num(corr_band)};
}

CriterionResult c2_poisson_laplace(std::uint64_t seed, long N) {
  const IntensityModel lam = IntensityModel::lebesgue(1, 1.0);
  const std::vector<SmoothFn> fs = bump_catalog();
  Window W = fs[0].support();
  for (const SmoothFn& f : fs) W = box_union(W, f.support());
  Rng rng(seed);
  std::vector<Configuration> samples;
  samples.reserve(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k) samples.push_back(sample_poisson(lam, W, rng));

  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double closed = laplace_poisson_closed(lam, fs[i]);
    const MCEstimate emp = laplace_empirical(samples, fs[i]);
    const bool ok = within(emp.value, closed, 3.0 * emp.se + 1e-9);
    pass = pass && ok;
    detail << "f" << i << ": closed=" << num(closed)
           << " emp=" << num(emp.value) << "+-" << num(emp.se) << "; ";
  }
  return {2, "poisson-laplace", pass, detail.str()};
}

CriterionResult c3_gaussian_oracle(std::uint64_t seed) {
  const ClusterProcessModel model = gaussian_model(seed, 1e-12);
  const double grid[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double worst = 0.0;
  for (double a : grid) {
    ClusterVector y1 = cluster1({a});
    const double q = conv_density(model, y1, ConvMethod::quadrature, false).s;
    const double c = lambda_star_gaussian_closed(model, y1);
    worst = std::max(worst, std::abs(q - c) / std::abs(c));
  }
  for (double a : grid)
    for (double b : grid) {
      ClusterVector y2 = cluster1({a, b});
      const double q = conv_density(model, y2, ConvMethod::quadrature, false).s;
      const double c = lambda_star_gaussian_closed(model, y2);
      worst = std::max(worst, std::abs(q - c) / std::abs(c));
    }
  for (double a : grid)
    for (double b : grid)
      for (double c3 : grid) {
        ClusterVector y3 = cluster1({a, b, c3});
        const double q =
            conv_density(model, y3, ConvMethod::quadrature, false).s;
        const double c = lambda_star_gaussian_closed(model, y3);
        worst = std::max(worst, std::abs(q - c) / std::abs(c));
      }
  // 1/(2 sqrt(pi)), the frozen pinned value of s_2 at the origin.
  const double s2_origin =
      lambda_star_gaussian_closed(model, cluster1({0.0, 0.0}));
  const double pinned = 0.28209479177387814;
  const bool pass =
      worst <= 1e-6 && std::abs(s2_origin - pinned) <= 1e-13;
  return {3, "gaussian-lambda-star-oracle", pass,
          "worst rel err=" + num(worst) + " s2(0,0)=" + num(s2_origin)};
}

CriterionResult c4_projection(std::uint64_t seed, long N) {
  const ClusterProcessModel model = gaussian_model(seed);
  const std::vector<SmoothFn> fs = {bump_catalog()[0], bump_catalog()[1],
                                    bump_catalog()[4]};
  Window K = fs[0].support();
  for (const SmoothFn& f : fs) K = box_union(K, f.support());
  Rng rng_samples(seed ^ 0x11);
  std::vector<Configuration> samples;
  samples.reserve(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k)
    samples.push_back(sample_mucl(model, K, rng_samples));

  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    Rng rng_closed(seed ^ (0x22 + i));
    const MCEstimate closed = laplace_mucl_closed(model, fs[i], rng_closed);
    const MCEstimate emp = laplace_empirical(samples, fs[i]);
    const double band =
        3.0 * std::sqrt(closed.se * closed.se + emp.se * emp.se) +
        closed.bias_bound;
    const bool ok = within(closed.value, emp.value, band);
    pass = pass && ok;
    detail << "f" << i << ": closed=" << num(closed.value) << "+-"
           << num(closed.se) << " emp=" << num(emp.value) << "+-"
           << num(emp.se) << "; ";
  }
  return {4, "projection-identity", pass, detail.str()};
}

CriterionResult c5_retained_mass(std::uint64_t seed, long N) {
  const ClusterProcessModel model = gaussian_model(seed);
  const Window K = window1(-0.5, 0.5);
  Rng rng_a(seed ^ 0x33), rng_b(seed ^ 0x44);
  RunningStat retained;
  for (long k = 0; k < N; ++k)
    retained.add(static_cast<double>(
        sample_lifted(model, K, rng_a).lifted.clusters.size()));
  const MCEstimate mass = lambda_star_region_mass(model, K, N, rng_b);
  const double band =
      3.0 * std::sqrt(retained.se() * retained.se() + mass.se * mass.se) +
      mass.bias_bound;
  const bool pass = within(retained.mean(), mass.value, band);
  return {5, "retained-cluster-mass", pass,
          "E[#retained]=" + num(retained.mean()) + "+-" + num(retained.se()) +
              " lambda*-mass=" + num(mass.value) + "+-" + num(mass.se)};
}

CriterionResult c6_pgf_bridge(std::uint64_t seed, long N) {
  const ClusterProcessModel model = gaussian_model(seed);
  const Window K = window1(-0.5, 0.5);
  Rng rng_s(seed ^ 0x55), rng_c(seed ^ 0x66);
  std::vector<Configuration> samples;
  samples.reserve(static_cast<std::size_t>(N));
  for (long k = 0; k < N; ++k) samples.push_back(sample_mucl(model, K, rng_s));

  bool pass = true;
  std::ostringstream detail;
  for (double q : {0.3, 0.6, 0.9}) {
    const MCEstimate closed = pgf_closed(model, K, q, N, rng_c);
    const MCEstimate emp = pgf_empirical(samples, K, q);
    const double band =
        3.0 * std::sqrt(closed.se * closed.se + emp.se * emp.se) +
        closed.bias_bound + emp.bias_bound;
    const bool ok = within(closed.value, emp.value, band);
    pass = pass && ok;
    detail << "q=" << num(q) << ": closed=" << num(closed.value)
           << " emp=" << num(emp.value) << "; ";
  }
  return {6, "pgf-bridge", pass, detail.str()};
}

CriterionResult c7_blowup(std::uint64_t seed) {
  const ClusterProcessModel model = blowup_model(seed);
  bool diverged = false;
  std::string info = "no divergence raised";
  try {
    conv_density(model, cluster1({0.0}), ConvMethod::quadrature, false);
  } catch (const DivergenceError& e) {
    const auto& est = e.report().estimates;
    int growths = 0;
    for (std::size_t i = 1; i < est.size(); ++i)
      if (est[i] > 1.10 * est[i - 1]) ++growths;
    diverged = est.size() >= 4 && growths >= 4;
    info = "divergence in '" + e.report().context +
           "' after " + std::to_string(est.size()) + " doublings, " +
           std::to_string(growths) + " growths > 10%";
  }
  return {7, "blow-up-detection", diverged, info};
}

CriterionResult c8_quasi_invariance(std::uint64_t seed, long N,
                                    long norm_draws) {
  const ClusterProcessModel model = gaussian_model(seed);
  const std::vector<CompactDiffeo> phis = {make_phi(0.0, 1.0, 0.10),
                                           make_phi(0.3, 0.8, -0.15),
                                           make_phi(-0.2, 1.2, 0.08)};
  const std::vector<CylinderFn> Fs = {make_F1(), make_F2(), make_G1()};

  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    Rng rng(seed ^ (0x77 + i));
    const QiResidual r = quasi_invariance_residual(model, phis[i], Fs[i], N,
                                                   rng, norm_draws);
    const bool ok = r.residual <= 3.0 * r.combined_se;
    pass = pass && ok;
    detail << "pair" << i << ": residual=" << num(r.residual) << " (3se="
           << num(3.0 * r.combined_se) << "); ";
  }

  // E[R] = 1 over the lifted field restricted to clusters meeting supp phi.
  {
    Rng rng(seed ^ 0x88);
    const long M = std::max<long>(N / 5, 2000);
    const RnDensityLifted R(model, phis[0], norm_draws, rng);
    RunningStat st;
    for (long k = 0; k < M; ++k)
      st.add(R(sample_lifted(model, phis[0].support(), rng).lifted));
    const double band =
        3.0 * (st.se() + std::abs(st.mean()) * R.norm_se());
    const bool ok = within(st.mean(), 1.0, band);
    pass = pass && ok;
    detail << "E[R]=" << num(st.mean()) << "+-" << num(st.se()) << "; ";
  }

  // Base-space L2 control.
  {
    Rng rng(seed ^ 0x99);
    const L2Check l2 = rn_l2_check(IntensityModel::lebesgue(1, 1.0), phis[0],
                                   N, rng);
    const bool ok_mean = within(l2.r_mean.value, 1.0, 3.0 * l2.r_mean.se);
    const bool ok_l2 =
        within(l2.r2_mean.value, l2.r2_closed,
               3.0 * l2.r2_mean.se + l2.closed_abs_err);
    pass = pass && ok_mean && ok_l2;
    detail << "E[R^2]=" << num(l2.r2_mean.value) << " closed="
           << num(l2.r2_closed);
  }
  return {8, "quasi-invariance", pass, detail.str()};
}

CriterionResult c9_beta_fd(std::uint64_t seed) {
  const ClusterProcessModel tight = gaussian_model(seed, 1e-12);
  const double h = 1e-3;

  auto log_s = [&](const ClusterVector& y) {
    return std::log(conv_density(tight, y, ConvMethod::quadrature, false).s);
  };
  auto check_point = [&](const ClusterVector& y, double* worst) {
    const std::vector<double> beta = beta_vector(tight, y);
    for (int i = 0; i < y.size(); ++i) {
      ClusterVector yp = y, ym = y;
      Vec p = y.point(i);
      p[0] += h;
      yp.set_point(i, p);
      p[0] -= 2.0 * h;
      ym.set_point(i, p);
      const double fd = (log_s(yp) - log_s(ym)) / (2.0 * h);
      const double err = std::abs(beta[static_cast<std::size_t>(i)] - fd) /
                         std::max(1.0, std::abs(fd));
      *worst = std::max(*worst, err);
    }
  };

  double worst = 0.0;
  for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) check_point(cluster1({a}), &worst);
  const double pairs[10][2] = {{-1, -0.5}, {-1, 0},    {-1, 1},   {-0.5, 0.5},
                               {0, 0.3},   {0.2, -0.4}, {0.5, 1}, {1, 0.2},
                               {0.7, -0.7}, {-0.3, -0.9}};
  for (const auto& p : pairs) check_point(cluster1({p[0], p[1]}), &worst);
  const double triples[10][3] = {
      {0, 0, 0},        {0.5, -0.5, 0},  {1, 0.5, -0.5}, {-1, -0.5, 0.5},
      {0.3, 0.2, -0.1}, {0.8, -0.2, 0.4}, {-0.6, 0.6, 0}, {0.1, 0.9, -0.9},
      {-0.4, -0.8, 0.2}, {0.25, 0.5, 0.75}};
  for (const auto& t : triples) check_point(cluster1({t[0], t[1], t[2]}), &worst);

  // Closed-form pair drift: beta_1 = -(y1-y2)/2 for the unit Gaussian law.
  double worst_closed = 0.0;
  for (const auto& p : pairs) {
    const std::vector<double> beta = beta_vector(tight, cluster1({p[0], p[1]}));
    worst_closed = std::max(
        worst_closed, std::abs(beta[0] - (-(p[0] - p[1]) / 2.0)));
    worst_closed = std::max(
        worst_closed, std::abs(beta[1] - ((p[0] - p[1]) / 2.0)));
  }
  const bool pass = worst <= 1e-5 && worst_closed <= 1e-8;
  return {9, "log-derivative-fd", pass,
          "worst FD rel err=" + num(worst) +
              " worst closed-form err=" + num(worst_closed)};
}

CriterionResult c10_ibp(std::uint64_t seed, long N) {
  const ClusterProcessModel model = gaussian_model(seed);
  const std::vector<SmoothFn> b = bump_catalog();
  const VectorField v1 = make_v1(), v2 = make_v2();
  const CylinderFn F1 = make_F1(), F2 = make_F2(), G1 = make_G1(),
                   G2 = make_G2();

  bool pass = true;
  std::ostringstream detail;
  int idx = 0;
  auto record = [&](const char* tag, const IbpResult& r) {
    const bool ok = std::abs(r.residual) <= 3.0 * r.se;
    pass = pass && ok;
    detail << tag << idx << ": residual=" << num(r.residual)
           << " (3se=" << num(3.0 * r.se) << "); ";
    ++idx;
  };

  {
    Rng rng(seed ^ 0xaa);
    record("L", ibp_residual_lambda_star(model, b[0], b[1], v1, N, rng));
    record("L", ibp_residual_lambda_star(model, b[2], b[0], v2, N, rng));
    record("L", ibp_residual_lambda_star(model, b[3], b[1], v1, N, rng));
  }
  {
    Rng rng(seed ^ 0xbb);
    idx = 0;
    record("M", ibp_residual_mucl(model, F1, G1, v1, N, rng));
    record("M", ibp_residual_mucl(model, F2, G2, v2, N, rng));
    record("M", ibp_residual_mucl(model, F1, G2, v2, N, rng));
  }
  {
    Rng rng(seed ^ 0xcc);
    idx = 0;
    CylinderTerm ta;
    ta.kind = OuterKind::tanh_s;
    ta.a = {0.5};
    ta.c = 1.0;
    CylinderTerm tb;
    tb.kind = OuterKind::gauss;
    tb.a = {0.6};
    tb.c = 0.5;
    const CylinderFn A1({b[1]}, {ta});
    const CylinderFn A2({b[0]}, {tb});
    CylinderVectorField V;
    V.terms.emplace_back(A1, v1);
    V.terms.emplace_back(A2, v2);
    record("V", ibp_general(model, F1, G1, V, N, rng));
    record("V", ibp_general(model, F2, G1, V, N, rng));
    record("V", ibp_general(model, F1, G2, V, N, rng));
  }
  return {10, "ibp-residuals", pass, detail.str()};
}

CriterionResult c11_dirichlet_generator(std::uint64_t seed, long N) {
  const ClusterProcessModel model = gaussian_model(seed);
  Rng rng(seed ^ 0xdd);
  const DirGenCheck check =
      dirichlet_vs_generator(model, make_F1(), make_G1(), N, rng);
  Rng rng2(seed ^ 0xee);
  const MCEstimate quad_form =
      dirichlet_form(model, make_F1(), make_F1(), N / 5 + 2, rng2);
  const bool pass = check.residual <= 3.0 * check.combined_se &&
                    quad_form.value >= 0.0;
  return {11, "dirichlet-generator", pass,
          "E(F,G)=" + num(check.lhs.value) + " E[(HF)G]=" +
              num(check.rhs.value) + " residual=" + num(check.residual) +
              " (3se=" + num(3.0 * check.combined_se) +
              ") E(F,F)=" + num(quad_form.value)};
}

CriterionResult c12_dynamics(std::uint64_t seed, long n_paths, double dt,
                             double ou_T, long ou_n) {
  const ClusterProcessModel model = gaussian_model(seed);
  const Window K = window1(-1.5, 1.5);
  const std::vector<SmoothFn> obs = {SmoothFn::bump(vec1(0.0), 1.0, 1.0),
                                     SmoothFn::bump(vec1(0.5), 1.0, 0.8)};
  bool pass = true;
  std::ostringstream detail;

  {
    Rng rng(seed ^ 0xf1);
    const TrajectoryTable table =
        simulate(model, K, 1.0, dt, n_paths, obs, {0.0, 0.5, 1.0}, rng);
    for (std::size_t o = 0; o < obs.size(); ++o) {
      const SliceStats s0 = slice_stats(table.values[o][0]);
      for (std::size_t c = 1; c < table.times.size(); ++c) {
        const SliceStats st = slice_stats(table.values[o][c]);
        const double mean_band =
            3.0 * std::sqrt(st.se * st.se + s0.se * s0.se);
        const double var_band =
            3.0 * std::sqrt(st.var_se * st.var_se + s0.var_se * s0.var_se);
        const bool ok = within(st.mean, s0.mean, mean_band) &&
                        within(st.var, s0.var, var_band);
        pass = pass && ok;
        detail << "obs" << o << "@t=" << num(table.times[c])
               << ": dmean=" << num(st.mean - s0.mean)
               << " dvar=" << num(st.var - s0.var) << "; ";
      }
    }
  }

  {
    Rng rng(seed ^ 0xf2);
    const OuCheck ou = ou_difference_variance(pair_model(seed), ou_T, dt,
                                              ou_n, rng);
    const bool ok = std::abs(ou.variance - ou.expected) <= 0.05 * ou.expected;
    pass = pass && ok;
    detail << "OU var=" << num(ou.variance) << " expected=" << num(ou.expected)
           << "; ";
  }

  {
    Rng rng(seed ^ 0xf3);
    const MCEstimate sym =
        symmetry_residual(model, make_F1(), make_G1(), 0.5, dt, n_paths, rng);
    const bool ok = std::abs(sym.value) <= 3.0 * sym.se;
    pass = pass && ok;
    detail << "symmetry residual=" << num(sym.value) << "+-" << num(sym.se);
  }
  return {12, "dynamics-stationarity", pass, detail.str()};
}

CriterionResult c13_determinism(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.dimension = 1;
  cfg.intensity = "lebesgue";
  cfg.cluster = "product_gaussian";
  cfg.size_probs = {0.0, 0.4, 0.35, 0.25};
  cfg.sigma = 1.0;
  cfg.seed = seed;
  cfg.experiment = {{"n_samples", 200}, {"window", {-1.0, 1.0}}};
  const RunOutput a = run_subcommand(cfg, "sample", true);
  const RunOutput b = run_subcommand(cfg, "sample", true);
  const std::string da = a.manifest.dump(2);
  const std::string db = b.manifest.dump(2);
  bool same = da == db && a.csv_files.size() == b.csv_files.size();
  if (same)
    for (std::size_t i = 0; i < a.csv_files.size(); ++i)
      same = same && a.csv_files[i].first == b.csv_files[i].first &&
             a.csv_files[i].second == b.csv_files[i].second;
  return {13, "determinism", same,
          same ? "two runs produced byte-identical manifests and tables"
               : "outputs differ between identically seeded runs"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, bool quick) {
  const long N = quick ? 2000 : 100000;
  const long N_mid = quick ? 2000 : 20000;
  const long norm_draws = quick ? 20000 : 1000000;
  const long n_paths = quick ? 200 : 2000;
  const double dt = quick ? 5e-3 : 1e-3;
  const double ou_T = quick ? 2.0 : 5.0;
  const long ou_n = quick ? 1024 : 4096;

  std::vector<CriterionResult> out;
  out.push_back(c1_poisson_counts(seed + 1, N));
  out.push_back(c2_poisson_laplace(seed + 2, N));
  out.push_back(c3_gaussian_oracle(seed + 3));
  out.push_back(c4_projection(seed + 4, N));
  out.push_back(c5_retained_mass(seed + 5, N_mid));
  out.push_back(c6_pgf_bridge(seed + 6, N));
  out.push_back(c7_blowup(seed + 7));
  out.push_back(c8_quasi_invariance(seed + 8, N, norm_draws));
  out.push_back(c9_beta_fd(seed + 9));
  out.push_back(c10_ibp(seed + 10, N));
  out.push_back(c11_dirichlet_generator(seed + 11, N));
  out.push_back(c12_dynamics(seed + 12, n_paths, dt, ou_T, ou_n));
  out.push_back(c13_determinism(seed + 13));
  return out;
}

}  // namespace pcp
