#include "pcp/lambda_star.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcp/kernels.hpp"
#include "pcp/properness.hpp"
#include "pcp/quadrature.hpp"

namespace pcp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_density_cluster(const ClusterProcessModel& model,
                             const ClusterVector& ybar) {
  if (ybar.dim != model.dim())
    throw std::invalid_argument("lambda_star: dimension mismatch");
  if (ybar.size() == 0)
    throw std::runtime_error("lambda_star mass at X⁰ is infinite");
  if (!model.absolutely_continuous())
    throw std::logic_error(
        "lambda_star density requires a cluster law with densities");
}

bool closed_form_ok(const ClusterProcessModel& model, int n, double* sigma) {
  return model.lambda().kind() == IntensityKind::lebesgue &&
         model.eta().gaussian_form(n, sigma);
}

ConvResult conv_closed(const ClusterProcessModel& model,
                       const ClusterVector& ybar, bool want_grad) {
  const int n = ybar.size();
  const int d = ybar.dim;
  double sigma = 1.0;
  model.eta().gaussian_form(n, &sigma);
  const double s2 = sigma * sigma;
  double s = model.lambda().scale();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (int c = 0; c < d; ++c) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += ybar.point(i)[c];
    m /= static_cast<double>(n);
    mean[static_cast<std::size_t>(c)] = m;
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dlt = ybar.point(i)[c] - m;
      q += dlt * dlt;
    }
    s *= std::pow(kTwoPi * s2, -0.5 * static_cast<double>(n - 1)) /
         std::sqrt(static_cast<double>(n)) * std::exp(-q / (2.0 * s2));
  }
  ConvResult out;
  out.s = s;
  out.abs_err = 4e-16 * std::abs(s);
  if (want_grad) {
    out.beta.assign(static_cast<std::size_t>(n * d), 0.0);
    if (s > model.numerics().density_floor)
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c)
          out.beta[static_cast<std::size_t>(i * d + c)] =
              (mean[static_cast<std::size_t>(c)] - ybar.point(i)[c]) / s2;
  }
  return out;
}

// One midpoint-doubling pass over [a,b] for the Gaussian-cluster integrand
// w(x) exp(-kappa (x-m)^2), accumulating the zeroth and first moments.
struct SegMoments {
  double m0 = 0.0, m1 = 0.0, err = 0.0;
  long evals = 0;
};

SegMoments gauss_segment(const IntensityModel& lam, double a, double b,
                         double m, double kappa, double tol) {
  SegMoments out;
  std::vector<double> xs, t, e, w;
  std::size_t n = 64;
  double prev0 = 0.0;
  bool have_prev = false;
  for (int pass = 0; pass < 14; ++pass, n *= 2) {
    const double h = (b - a) / static_cast<double>(n);
    xs.resize(n);
    t.resize(n);
    e.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = a + (static_cast<double>(i) + 0.5) * h;
      const double dx = xs[i] - m;
      t[i] = dx * dx;
    }
    kernels::exp_affine(t.data(), -kappa, 0.0, e.data(), n);
    lam.density_batch(xs.data(), w.data(), n);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a_i = w[i] * e[i];
      m0 += a_i;
      m1 += a_i * xs[i];
    }
    m0 *= h;
    m1 *= h;
    out.evals += static_cast<long>(n);
    if (have_prev && std::abs(m0 - prev0) <= tol) {
      out.m0 = m0;
      out.m1 = m1;
      out.err = std::abs(m0 - prev0);
      return out;
    }
    prev0 = m0;
    out.m0 = m0;
    out.m1 = m1;
    out.err = have_prev ? std::abs(m0 - prev0) : std::abs(m0);
    have_prev = true;
  }
  return out;
}

// General-cluster integrand w(x) prod_i hat h(y_i - x), with per-point
// log-derivative numerators for the gradient.
struct SegGeneral {
  double m0 = 0.0, err = 0.0;
  std::vector<double> num;  // length n
  long evals = 0;
};

SegGeneral general_segment(const ClusterProcessModel& model,
                           const ClusterVector& ybar, double a, double b,
                           bool want_grad, double tol) {
  const int npts = ybar.size();
  SegGeneral out;
  out.num.assign(static_cast<std::size_t>(npts), 0.0);
  const auto& law = model.eta();
  const auto& lam = model.lambda();
  std::vector<double> xs, w;
  std::size_t n = 64;
  double prev0 = 0.0;
  bool have_prev = false;
  for (int pass = 0; pass < 14; ++pass, n *= 2) {
    const double h = (b - a) / static_cast<double>(n);
    xs.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      xs[i] = a + (static_cast<double>(i) + 0.5) * h;
    lam.density_batch(xs.data(), w.data(), n);
    double m0 = 0.0;
    std::vector<double> num(static_cast<std::size_t>(npts), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double prod = w[k];
      for (int i = 0; i < npts && prod != 0.0; ++i)
        prod *= law.point_density(vec1(ybar.point(i)[0] - xs[k]), npts);
      if (prod == 0.0) continue;
      m0 += prod;
      if (want_grad)
        for (int i = 0; i < npts; ++i)
          num[static_cast<std::size_t>(i)] +=
              prod *
              law.point_log_density_grad(vec1(ybar.point(i)[0] - xs[k]),
                                         npts)[0];
    }
    m0 *= h;
    for (auto& v : num) v *= h;
    out.evals += static_cast<long>(n);
    if (have_prev && std::abs(m0 - prev0) <= tol) {
      out.m0 = m0;
      out.num = num;
      out.err = std::abs(m0 - prev0);
      return out;
    }
    prev0 = m0;
    out.m0 = m0;
    out.num = num;
    out.err = have_prev ? std::abs(m0 - prev0) : std::abs(m0);
    have_prev = true;
  }
  return out;
}

ConvResult conv_quadrature_1d(const ClusterProcessModel& model,
                              const ClusterVector& ybar, bool want_grad) {
  const int n = ybar.size();
  const auto& num = model.numerics();
  double sigma = 1.0;
  const bool gaussian = model.eta().gaussian_form(n, &sigma);

  double ysum = 0.0, ymin = ybar.point(0)[0], ymax = ymin;
  for (int i = 0; i < n; ++i) {
    const double y = ybar.point(i)[0];
    ysum += y;
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double centre = ysum / static_cast<double>(n);

  double kappa = 0.0, prefactor = 1.0;
  if (gaussian) {
    const double s2 = sigma * sigma;
    kappa = static_cast<double>(n) / (2.0 * s2);
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dlt = ybar.point(i)[0] - centre;
      q += dlt * dlt;
    }
    prefactor = std::pow(kTwoPi * s2, -0.5 * static_cast<double>(n)) *
                std::exp(-q / (2.0 * s2));
    if (prefactor == 0.0) {
      // The spread alone puts s below any floor; skip the quadrature.
      ConvResult out;
      out.s = 0.0;
      if (want_grad) out.beta.assign(static_cast<std::size_t>(n), 0.0);
      return out;
    }
  }

  const double w0 =
      gaussian ? num.tail_sigmas * sigma / std::sqrt(static_cast<double>(n))
               : 8.0 + 0.5 * (ymax - ymin);
  const double seg_tol = 0.25 * num.quad_abs_tol;

  double total0 = 0.0, total1 = 0.0, total_err = 0.0;
  std::vector<double> total_num(static_cast<std::size_t>(n), 0.0);
  long evals = 0;

  DivergenceReport report;
  report.context = "lambda_star s_n quadrature";
  int consecutive_growth = 0;
  bool converged = false;

  double w = w0;
  for (int step = 0; step <= 24; ++step) {
    double inc0 = 0.0;
    // step 0: core segment; afterwards: the two flanks just added
    const double segs[2][2] = {
        {step == 0 ? centre - w : centre - 2.0 * w,
         step == 0 ? centre + w : centre - w},
        {centre + w, centre + 2.0 * w}};
    const int nseg = step == 0 ? 1 : 2;
    for (int sgi = 0; sgi < nseg; ++sgi) {
      const double a = segs[sgi][0], b = segs[sgi][1];
      if (gaussian) {
        const SegMoments sm = gauss_segment(model.lambda(), a, b, centre,
                                            kappa, seg_tol);
        inc0 += sm.m0;
        total1 += sm.m1;
        total_err += sm.err;
        evals += sm.evals;
      } else {
        const SegGeneral sg =
            general_segment(model, ybar, a, b, want_grad, seg_tol);
        inc0 += sg.m0;
        for (int i = 0; i < n; ++i)
          total_num[static_cast<std::size_t>(i)] +=
              sg.num[static_cast<std::size_t>(i)];
        total_err += sg.err;
        evals += sg.evals;
      }
    }
    const double prev_total = total0;
    total0 += inc0;
    report.half_widths.push_back(w);
    report.estimates.push_back(total0);
    if (step > 0) {
      const double growth =
          std::abs(inc0) / std::max(std::abs(prev_total), 1e-300);
      if (growth > 0.10) {
        if (++consecutive_growth >= 4) throw DivergenceError(report);
      } else {
        consecutive_growth = 0;
      }
      if (std::abs(inc0) <=
          std::max(num.quad_abs_tol, 1e-12 * std::abs(total0))) {
        converged = true;
        break;
      }
    }
    if (step > 0) w *= 2.0;  // first flank pass reuses the core half-width
  }
  if (!converged) throw DivergenceError(report);

  ConvResult out;
  out.n_evals = evals;
  if (gaussian) {
    out.s = prefactor * total0;
    out.abs_err = prefactor * total_err + num.quad_abs_tol * prefactor;
    if (want_grad) {
      out.beta.assign(static_cast<std::size_t>(n), 0.0);
      if (out.s > num.density_floor && total0 > 0.0) {
        const double xhat = total1 / total0;
        for (int i = 0; i < n; ++i)
          out.beta[static_cast<std::size_t>(i)] =
              (xhat - ybar.point(i)[0]) / (sigma * sigma);
      }
    }
  } else {
    out.s = total0;
    out.abs_err = total_err + num.quad_abs_tol;
    if (want_grad) {
      out.beta.assign(static_cast<std::size_t>(n), 0.0);
      if (out.s > num.density_floor)
        for (int i = 0; i < n; ++i)
          out.beta[static_cast<std::size_t>(i)] =
              total_num[static_cast<std::size_t>(i)] / total0;
    }
  }
  return out;
}

ConvResult conv_quadrature_2d(const ClusterProcessModel& model,
                              const ClusterVector& ybar, bool want_grad) {
  const int n = ybar.size();
  const auto& num = model.numerics();
  double sigma = 1.0;
  if (!model.eta().gaussian_form(n, &sigma))
    throw std::runtime_error(
        "quadrature convolution in d=2 supports Gaussian cluster laws only");
  const double s2 = sigma * sigma;
  const double kappa = static_cast<double>(n) / (2.0 * s2);

  Vec m{{}, 2};
  double q = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < n; ++i) m[c] += ybar.point(i)[c];
    m[c] /= static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
      const double dlt = ybar.point(i)[c] - m[c];
      q += dlt * dlt;
    }
  }
  const double prefactor =
      std::pow(kTwoPi * s2, -static_cast<double>(n)) * std::exp(-q / (2.0 * s2));

  const double reach = num.tail_sigmas * sigma / std::sqrt(static_cast<double>(n));
  Window dom{{}, {}, 2};
  for (int c = 0; c < 2; ++c) {
    dom.lower[static_cast<std::size_t>(c)] = m[c] - reach;
    dom.upper[static_cast<std::size_t>(c)] = m[c] + reach;
  }
  const auto& lam = model.lambda();
  auto moment = [&](int which) {
    auto f = [&](const double* xr, double y, double* out, std::size_t cnt) {
      for (std::size_t i = 0; i < cnt; ++i) {
        const double dx = xr[i] - m[0];
        const double dy = y - m[1];
        const double g = std::exp(-kappa * (dx * dx + dy * dy));
        double v = lam.density(vec2(xr[i], y)) * g;
        if (which == 1) v *= xr[i];
        if (which == 2) v *= y;
        out[i] = v;
      }
    };
    return integrate_grid_2d(f, dom.lower[0], dom.upper[0], dom.lower[1],
                             dom.upper[1], 0.25 * num.quad_abs_tol);
  };

  const QuadResult m0 = moment(0);
  ConvResult out;
  out.s = prefactor * m0.value;
  out.abs_err = prefactor * m0.abs_err;
  out.n_evals = m0.n_evals;
  if (want_grad) {
    out.beta.assign(static_cast<std::size_t>(2 * n), 0.0);
    if (out.s > num.density_floor && m0.value > 0.0) {
      const QuadResult m1x = moment(1);
      const QuadResult m1y = moment(2);
      const double xh = m1x.value / m0.value, yh = m1y.value / m0.value;
      for (int i = 0; i < n; ++i) {
        out.beta[static_cast<std::size_t>(2 * i)] =
            (xh - ybar.point(i)[0]) / s2;
        out.beta[static_cast<std::size_t>(2 * i + 1)] =
            (yh - ybar.point(i)[1]) / s2;
      }
      out.n_evals += m1x.n_evals + m1y.n_evals;
    }
  }
  return out;
}

}  // namespace

ConvResult conv_density(const ClusterProcessModel& model,
                        const ClusterVector& ybar, ConvMethod method,
                        bool want_grad) {
  require_density_cluster(model, ybar);
  const int n = ybar.size();
  if (n > model.eta().n_max()) {
    ConvResult out;  // outside the size law: density identically zero
    out.s = 0.0;
    if (want_grad)
      out.beta.assign(static_cast<std::size_t>(n * ybar.dim), 0.0);
    return out;
  }
  double sigma = 1.0;
  switch (method) {
    case ConvMethod::automatic:
      if (closed_form_ok(model, n, &sigma))
        return conv_closed(model, ybar, want_grad);
      break;
    case ConvMethod::gaussian_closed:
      if (!closed_form_ok(model, n, &sigma))
        throw std::invalid_argument(
            "closed form requires a product-Gaussian cluster law over "
            "Lebesgue centres");
      return conv_closed(model, ybar, want_grad);
    case ConvMethod::quadrature:
      break;
  }
  if (model.dim() == 1) return conv_quadrature_1d(model, ybar, want_grad);
  if (model.dim() == 2) return conv_quadrature_2d(model, ybar, want_grad);
  throw std::runtime_error("quadrature convolution not supported for d=3");
}

double lambda_star_density(const ClusterProcessModel& model,
                           const ClusterVector& ybar) {
  return lambda_star_density_full(model, ybar).s;
}

ConvResult lambda_star_density_full(const ClusterProcessModel& model,
                                    const ClusterVector& ybar) {
  ConvResult r = conv_density(model, ybar, ConvMethod::quadrature, false);
  const int n = ybar.size();
  const double pn = n <= model.eta().n_max()
                        ? model.eta().size_probs()[static_cast<std::size_t>(n)]
                        : 0.0;
  r.s *= pn;
  r.abs_err *= pn;
  return r;
}

double lambda_star_gaussian_closed(const ClusterProcessModel& model,
                                   const ClusterVector& ybar) {
  if (ybar.size() == 0)
    throw std::runtime_error("lambda_star mass at X⁰ is infinite");
  if (model.dim() != 1 ||
      model.lambda().kind() != IntensityKind::lebesgue ||
      model.lambda().scale() != 1.0 ||
      model.eta().kind() != ClusterKind::product_gaussian ||
      model.eta().sigma() != 1.0)
    throw std::invalid_argument(
        "printed closed form needs unit Lebesgue centres and unit "
        "product-Gaussian clusters in d=1");
  const int n = ybar.size();
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = ybar.point(i)[0];
    sum += y;
    sumsq += y * y;
  }
  const double q = sumsq - sum * sum / static_cast<double>(n);
  return std::pow(kTwoPi, -0.5 * static_cast<double>(n - 1)) /
         std::sqrt(static_cast<double>(n)) * std::exp(-0.5 * q);
}

MCEstimate lambda_star_region_mass(const ClusterProcessModel& model,
                                   const Window& B, long n_draws, Rng& rng) {
  if (n_draws < 1)
    throw std::invalid_argument("lambda_star_region_mass: need n_draws >= 1");
  RunningStat stat;
  for (long i = 0; i < n_draws; ++i) {
    const ClusterVector ybar = model.eta().sample(rng);
    stat.add(ybar.size() == 0 ? 0.0 : droplet_measure(model, B, ybar));
  }
  return stat.estimate();
}

OrthoCheck orthogonal_decomposition_check(const ClusterProcessModel& model,
                                          int n, double z1_lo, double z1_hi,
                                          const Window& zprime, long n_draws,
                                          Rng& rng) {
  if (!model.lambda().translation_invariant())
    throw std::invalid_argument(
        "orthogonal decomposition requires a translation-invariant intensity");
  if (model.dim() != 1)
    throw std::invalid_argument("orthogonal decomposition implemented for d=1");
  if (n < 1 || n > model.eta().n_max())
    throw std::invalid_argument("orthogonal decomposition: size out of range");
  if (zprime.dim != n - 1)
    throw std::invalid_argument(
        "orthogonal decomposition: shape box must have dimension n-1");
  if (!model.absolutely_continuous())
    throw std::logic_error("orthogonal decomposition needs cluster densities");

  // U_n: first column along the diagonal, remainder by Gram-Schmidt.
  double U[9][9] = {};
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) U[i][0] = inv_sqrt_n;
  for (int j = 1; j < n; ++j) {
    double col[9] = {};
    col[j] = 1.0;  // start from a standard basis vector
    for (int k = 0; k < j; ++k) {
      double proj = 0.0;
      for (int i = 0; i < n; ++i) proj += col[i] * U[i][k];
      for (int i = 0; i < n; ++i) col[i] -= proj * U[i][k];
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += col[i] * col[i];
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) U[i][j] = col[i] / nrm;
  }

  const double pn = model.eta().size_probs()[static_cast<std::size_t>(n)];
  const double scale = model.lambda().scale();
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  // Side (b): shape-coordinate probability from rotated cluster draws.
  RunningStat shape;
  const long m_draws = std::max<long>(1, n_draws);
  for (long t = 0; t < m_draws; ++t) {
    const ClusterVector yhat = model.eta().sample_given_size(n, rng);
    bool in = true;
    for (int j = 1; j < n && in; ++j) {
      double zj = 0.0;
      for (int i = 0; i < n; ++i) zj += yhat.point(i)[0] * U[i][j];
      const auto k = static_cast<std::size_t>(j - 1);
      if (zj < zprime.lower[k] || zj >= zprime.upper[k]) in = false;
    }
    shape.add(in ? 1.0 : 0.0);
  }
  const double b_factor = pn / sqrt_n * scale * (z1_hi - z1_lo);
  MCEstimate side_b{b_factor * shape.mean(), std::abs(b_factor) * shape.se(),
                    shape.n(), 0.0};

  // Side (a): direct MC of the lambda*_n mass of the rotated box.
  const double reach = sqrt_n * model.eta().radius_for_tail(1e-9);
  const double x_lo = (z1_lo - reach) / sqrt_n;
  const double x_hi = (z1_hi + reach) / sqrt_n;
  const double w_mass = scale * (x_hi - x_lo);
  RunningStat direct;
  for (long t = 0; t < m_draws; ++t) {
    const double x = rng.uniform(x_lo, x_hi);
    const ClusterVector yhat = model.eta().sample_given_size(n, rng);
    double z1 = 0.0;
    bool in = true;
    for (int j = 0; j < n && in; ++j) {
      double zj = 0.0;
      for (int i = 0; i < n; ++i)
        zj += (yhat.point(i)[0] + x) * U[i][j];
      if (j == 0) {
        z1 = zj;
        if (z1 < z1_lo || z1 >= z1_hi) in = false;
      } else {
        const auto k = static_cast<std::size_t>(j - 1);
        if (zj < zprime.lower[k] || zj >= zprime.upper[k]) in = false;
      }
    }
    direct.add(in ? pn * w_mass : 0.0);
  }
  MCEstimate side_a = direct.estimate();

  OrthoCheck out;
  out.side_a = side_a;
  out.side_b = side_b;
  out.residual = std::abs(side_a.value - side_b.value);
  out.combined_se = std::sqrt(side_a.se * side_a.se + side_b.se * side_b.se);
  return out;
}

}  // namespace pcp
