#include "pcp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcp/calculus.hpp"
#include "pcp/kernels.hpp"
#include "pcp/lambda_star.hpp"
#include "pcp/quadrature.hpp"

namespace pcp {

namespace {

// Advance one cluster by dt; on drift divergence, recurse into two half
// steps so the physical time still advances by exactly dt.
void advance_cluster(const ClusterProcessModel& model, ClusterVector& ybar,
                     double dt, Rng& rng, int halvings_left,
                     double drift_scale) {
  const int n = ybar.size();
  const int d = ybar.dim;
  if (n == 0) return;
  std::vector<double> beta;
  try {
    beta = beta_vector(model, ybar);
  } catch (const DivergenceError&) {
    if (halvings_left <= 0)
      throw std::runtime_error(
          "em_step: drift divergence persisted through 10 step halvings");
    advance_cluster(model, ybar, dt / 2, rng, halvings_left - 1, drift_scale);
    advance_cluster(model, ybar, dt / 2, rng, halvings_left - 1, drift_scale);
    return;
  }
  const std::size_t m = static_cast<std::size_t>(n) * d;
  std::vector<double> noise(m);
  for (std::size_t j = 0; j < m; ++j) noise[j] = rng.normal();
  if (drift_scale != 1.0)
    for (double& b : beta) b *= drift_scale;
  kernels::em_update(ybar.coords.data(), beta.data(), noise.data(), dt,
                     std::sqrt(2.0 * dt), m);
}

double slice_variance(const std::vector<double>& xs) {
  RunningStat st;
  for (double x : xs) st.add(x);
  return st.variance();
}

double slice_mean(const std::vector<double>& xs) {
  RunningStat st;
  for (double x : xs) st.add(x);
  return st.mean();
}

double slice_se(const std::vector<double>& xs) {
  RunningStat st;
  for (double x : xs) st.add(x);
  return st.se();
}

}  // namespace

DynamicsState em_step(const ClusterProcessModel& model,
                      const DynamicsState& state, double dt, Rng& rng,
                      int max_halvings, double drift_scale) {
  if (dt <= 0.0) throw std::invalid_argument("em_step: dt must be positive");
  DynamicsState next = state;
  for (ClusterVector& ybar : next.lifted.clusters)
    advance_cluster(model, ybar, dt, rng, max_halvings, drift_scale);
  next.time = state.time + dt;
  return next;
}

TrajectoryTable simulate(const ClusterProcessModel& model, const Window& K,
                         double T, double dt, long n_paths,
                         const std::vector<SmoothFn>& observables,
                         const std::vector<double>& checkpoint_times, Rng& rng,
                         const SimOptions& opt) {
  if (T < 0.0 || dt <= 0.0)
    throw std::invalid_argument("simulate: need T >= 0 and dt > 0");
  if (n_paths < 1) throw std::invalid_argument("simulate: need >= 1 path");
  for (double t : checkpoint_times)
    if (t < 0.0 || t > T + 1e-12)
      throw std::invalid_argument("simulate: checkpoint outside [0, T]");

  const long n_steps = (T > 0.0) ? std::max<long>(1, std::lround(T / dt)) : 0;
  const double dt_eff = (n_steps > 0) ? T / n_steps : 0.0;
  std::vector<long> ck_steps;
  for (double t : checkpoint_times)
    ck_steps.push_back((n_steps > 0) ? std::lround(t / dt_eff) : 0);

  const double r_drift = 4.0 * std::sqrt(2.0 * std::max(T, 0.0));
  const Window init_region = K.dilate(r_drift);
  const Window buffer = init_region.dilate(model.r_trunc());

  TrajectoryTable table;
  table.times = checkpoint_times;
  table.n_paths = n_paths;
  for (std::size_t o = 0; o < observables.size(); ++o) {
    table.observable_names.push_back("f" + std::to_string(o));
    table.values.emplace_back(checkpoint_times.size(),
                              std::vector<double>(
                                  static_cast<std::size_t>(n_paths), 0.0));
  }
  table.notes =
      "stationary start on K dilated by r_drift=" + std::to_string(r_drift) +
      "; clusters kept (never deleted) inside buffer; truncation scale " +
      std::to_string(model.numerics().eps_trunc);

  for (long p = 0; p < n_paths; ++p) {
    Rng path_rng = rng.substream(static_cast<std::uint64_t>(p) + 1);
    DynamicsState state;
    state.lifted = sample_lifted(model, init_region, path_rng).lifted;
    state.buffer = buffer;
    state.time = 0.0;

    long step = 0;
    auto record = [&](long at_step) {
      for (std::size_t c = 0; c < ck_steps.size(); ++c)
        if (ck_steps[c] == at_step) {
          const Configuration gamma = project_lifted(state.lifted);
          for (std::size_t o = 0; o < observables.size(); ++o)
            table.values[o][c][static_cast<std::size_t>(p)] =
                pair(observables[o], gamma);
        }
    };
    record(0);
    for (step = 1; step <= n_steps; ++step) {
      state = em_step(model, state, dt_eff, path_rng, 10, opt.drift_scale);
      record(step);
    }
  }
  return table;
}

std::vector<StationarityRow> stationarity_report(
    const TrajectoryTable& table,
    const std::vector<std::vector<double>>& direct_ensemble, double alpha) {
  if (direct_ensemble.size() != table.values.size())
    throw std::invalid_argument(
        "stationarity_report: one direct ensemble per observable required");
  const std::size_t n_slices =
      table.values.size() * (table.times.empty() ? 0 : table.times.size());
  const double level = (n_slices > 0) ? alpha / static_cast<double>(n_slices)
                                      : alpha;

  std::vector<StationarityRow> rows;
  for (std::size_t o = 0; o < table.values.size(); ++o) {
    const std::vector<double>& direct = direct_ensemble[o];
    const double dmean = slice_mean(direct);
    const double dvar = slice_variance(direct);
    const double dse = slice_se(direct);
    for (std::size_t c = 0; c < table.times.size(); ++c) {
      const std::vector<double>& slice = table.values[o][c];
      StationarityRow row;
      row.observable = static_cast<int>(o);
      row.time = table.times[c];
      row.mean_drift = slice_mean(slice) - dmean;
      row.var_drift = slice_variance(slice) - dvar;
      row.mean_se = std::sqrt(slice_se(slice) * slice_se(slice) + dse * dse);
      row.ks_p = ks_two_sample(slice, direct).p_value;
      row.flagged = row.ks_p < level;
      rows.push_back(row);
    }
  }
  return rows;
}

MCEstimate symmetry_residual(const ClusterProcessModel& model,
                             const CylinderFn& F, const CylinderFn& G,
                             double t, double dt, long n_paths, Rng& rng) {
  if (t <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("symmetry_residual: need t, dt > 0");
  if (n_paths < 2)
    throw std::invalid_argument("symmetry_residual: need >= 2 paths");
  const Window K = box_union(F.inner_support(), G.inner_support());
  const long n_steps = std::max<long>(1, std::lround(t / dt));
  const double dt_eff = t / n_steps;
  const double r_drift = 4.0 * std::sqrt(2.0 * t);
  const Window init_region = K.dilate(r_drift);

  RunningStat st;
  for (long p = 0; p < n_paths; ++p) {
    Rng path_rng = rng.substream(static_cast<std::uint64_t>(p) + 1);
    DynamicsState state;
    state.lifted = sample_lifted(model, init_region, path_rng).lifted;
    state.buffer = init_region.dilate(model.r_trunc());

    const Configuration g0 = project_lifted(state.lifted);
    const double f0 = F.eval(g0);
    const double gg0 = G.eval(g0);
    for (long s = 0; s < n_steps; ++s)
      state = em_step(model, state, dt_eff, path_rng);
    const Configuration gt = project_lifted(state.lifted);
    st.add(f0 * G.eval(gt) - gg0 * F.eval(gt));
  }
  return st.estimate();
}

OuCheck ou_difference_variance(const ClusterProcessModel& model, double T,
                               double dt, long n_samples, Rng& rng) {
  double sigma = 0.0;
  const ClusterLaw& eta = model.eta();
  if (!eta.gaussian_form(2, &sigma) || model.dim() != 1 || eta.n_max() < 2 ||
      eta.size_probs()[2] <= 0.0)
    throw std::invalid_argument(
        "ou_difference_variance needs a d=1 Gaussian pair-cluster law");
  if (n_samples < 2)
    throw std::invalid_argument("ou_difference_variance: need >= 2 samples");

  // The difference coordinate is autonomous, so the centre placement is
  // irrelevant: evolve free pair clusters drawn from eta (u already
  // stationary) and read off Var(y1 - y2) at time T.
  DynamicsState state;
  state.lifted.dim = 1;
  state.lifted.window = window1(-1e12, 1e12);
  state.buffer = state.lifted.window;
  for (long k = 0; k < n_samples; ++k)
    state.lifted.clusters.push_back(model.eta().sample_given_size(2, rng));

  const long n_steps = std::max<long>(1, std::lround(T / dt));
  const double dt_eff = T / n_steps;
  for (long s = 0; s < n_steps; ++s)
    state = em_step(model, state, dt_eff, rng);

  RunningStat udiff;
  double m4 = 0.0;
  std::vector<double> us;
  us.reserve(static_cast<std::size_t>(n_samples));
  for (const ClusterVector& ybar : state.lifted.clusters) {
    const double u = ybar.point(0)[0] - ybar.point(1)[0];
    udiff.add(u);
    us.push_back(u);
  }
  const double mean = udiff.mean();
  const double var = udiff.variance();
  for (double u : us) m4 += std::pow(u - mean, 4.0);
  m4 /= static_cast<double>(us.size());

  OuCheck out;
  out.variance = var;
  out.expected = 2.0 * sigma * sigma;
  out.se = std::sqrt(std::max(m4 - var * var, 0.0) /
                     static_cast<double>(us.size()));
  out.n = n_samples;
  return out;
}

}  // namespace pcp
