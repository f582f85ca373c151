#include "pcp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcp {

Vec vec1(double x) {
  Vec v;
  v.dim = 1;
  v[0] = x;
  return v;
}

Vec vec2(double x, double y) {
  Vec v;
  v.dim = 2;
  v[0] = x;
  v[1] = y;
  return v;
}

Vec vec3(double x, double y, double z) {
  Vec v;
  v.dim = 3;
  v[0] = x;
  v[1] = y;
  v[2] = z;
  return v;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec r = a;
  for (int i = 0; i < a.dim; ++i) r[i] += b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r = a;
  for (int i = 0; i < a.dim; ++i) r[i] -= b[i];
  return r;
}

Vec operator*(double s, const Vec& a) {
  Vec r = a;
  for (int i = 0; i < a.dim; ++i) r[i] *= s;
  return r;
}

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (int i = 0; i < a.dim; ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const Vec& a) { return dot(a, a); }
double norm(const Vec& a) { return std::sqrt(norm2(a)); }

double dist_inf(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

bool Window::contains(const Vec& p) const {
  for (int i = 0; i < dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (p[i] < lower[k] || p[i] >= upper[k]) return false;
  }
  return true;
}

bool Window::contains_open(const Vec& p) const {
  for (int i = 0; i < dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (p[i] <= lower[k] || p[i] >= upper[k]) return false;
  }
  return true;
}

bool Window::contains_box(const Window& inner) const {
  for (int i = 0; i < dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (inner.lower[k] < lower[k] || inner.upper[k] > upper[k]) return false;
  }
  return true;
}

double Window::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= side(i);
  return v;
}

Vec Window::center() const {
  Vec c;
  c.dim = dim;
  for (int i = 0; i < dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    c[i] = 0.5 * (lower[k] + upper[k]);
  }
  return c;
}

Window Window::dilate(double r) const {
  Window w = *this;
  for (int i = 0; i < dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    w.lower[k] -= r;
    w.upper[k] += r;
  }
  return w;
}

Window window1(double lo, double hi, double merge_tol) {
  Window w;
  w.dim = 1;
  w.lower[0] = lo;
  w.upper[0] = hi;
  w.merge_tol = merge_tol;
  return w;
}

Window window2(double lx, double hx, double ly, double hy, double merge_tol) {
  Window w;
  w.dim = 2;
  w.lower = {lx, ly, 0.0};
  w.upper = {hx, hy, 0.0};
  w.merge_tol = merge_tol;
  return w;
}

Window box_union(const Window& a, const Window& b) {
  if (a.dim != b.dim) throw std::invalid_argument("box_union: dim mismatch");
  Window w = a;
  for (int i = 0; i < a.dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    w.lower[k] = std::min(a.lower[k], b.lower[k]);
    w.upper[k] = std::max(a.upper[k], b.upper[k]);
  }
  return w;
}

Window box_intersection(const Window& a, const Window& b) {
  if (a.dim != b.dim)
    throw std::invalid_argument("box_intersection: dim mismatch");
  Window w = a;
  for (int i = 0; i < a.dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    w.lower[k] = std::max(a.lower[k], b.lower[k]);
    w.upper[k] = std::min(a.upper[k], b.upper[k]);
  }
  return w;
}

bool box_empty(const Window& w) {
  for (int i = 0; i < w.dim; ++i)
    if (w.side(i) <= 0.0) return true;
  return false;
}

Vec ClusterVector::point(int i) const {
  Vec p;
  p.dim = dim;
  for (int k = 0; k < dim; ++k)
    p[k] = coords[static_cast<std::size_t>(i * dim + k)];
  return p;
}

void ClusterVector::set_point(int i, const Vec& p) {
  for (int k = 0; k < dim; ++k)
    coords[static_cast<std::size_t>(i * dim + k)] = p[k];
}

void ClusterVector::push_point(const Vec& p) {
  for (int k = 0; k < dim; ++k) coords.push_back(p[k]);
}

ClusterVector cluster1(std::initializer_list<double> xs) {
  ClusterVector c;
  c.dim = 1;
  c.coords.assign(xs.begin(), xs.end());
  return c;
}

Vec Configuration::atom(int i) const {
  Vec p;
  p.dim = dim;
  for (int k = 0; k < dim; ++k)
    p[k] = locations[static_cast<std::size_t>(i * dim + k)];
  return p;
}

long Configuration::total_points() const {
  long t = 0;
  for (int m : multiplicity) t += m;
  return t;
}

Configuration make_configuration(int dim, const Window& window,
                                 const std::vector<Vec>& points) {
  // Lexicographic sort, then a single merging sweep. The tolerance is tiny
  // (default 1e-12), so chained near-coincidences — which only arise from
  // deliberately duplicated analytic constructions — collapse correctly.
  std::vector<Vec> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [dim](const Vec& a, const Vec& b) {
    for (int k = 0; k < dim; ++k) {
      if (a[k] < b[k]) return true;
      if (a[k] > b[k]) return false;
    }
    return false;
  });

  Configuration g;
  g.dim = dim;
  g.window = window;
  const double tol = window.merge_tol;
  for (const Vec& p : sorted) {
    if (!g.multiplicity.empty()) {
      const Vec last = g.atom(g.n_atoms() - 1);
      if (dist_inf(last, p) <= tol) {
        ++g.multiplicity.back();
        continue;
      }
    }
    for (int k = 0; k < dim; ++k) g.locations.push_back(p[k]);
    g.multiplicity.push_back(1);
  }
  return g;
}

LiftedConfiguration make_lifted(int dim, const Window& window,
                                std::vector<ClusterVector> clusters) {
  LiftedConfiguration g;
  g.dim = dim;
  g.window = window;
  for (auto& c : clusters)
    if (!c.empty()) g.clusters.push_back(std::move(c));
  return g;
}

Configuration project_vector(const ClusterVector& xbar, const Window& window) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(xbar.size()));
  for (int i = 0; i < xbar.size(); ++i) pts.push_back(xbar.point(i));
  return make_configuration(xbar.dim, window, pts);
}

Configuration project_lifted(const LiftedConfiguration& gbar) {
  std::vector<Vec> pts;
  for (const auto& c : gbar.clusters)
    for (int i = 0; i < c.size(); ++i) pts.push_back(c.point(i));
  return make_configuration(gbar.dim, gbar.window, pts);
}

Configuration restrict_to_window(const Configuration& g, const Window& w) {
  Configuration r;
  r.dim = g.dim;
  r.window = w;
  for (int i = 0; i < g.n_atoms(); ++i) {
    const Vec p = g.atom(i);
    if (w.contains(p)) {
      for (int k = 0; k < g.dim; ++k) r.locations.push_back(p[k]);
      r.multiplicity.push_back(g.multiplicity[static_cast<std::size_t>(i)]);
    }
  }
  return r;
}

long count(const Configuration& g, const Window& B) {
  long t = 0;
  for (int i = 0; i < g.n_atoms(); ++i)
    if (B.contains(g.atom(i))) t += g.multiplicity[static_cast<std::size_t>(i)];
  return t;
}

ClusterVector shift_cluster(const ClusterVector& ybar, const Vec& x) {
  if (ybar.dim != x.dim)
    throw std::invalid_argument("shift_cluster: dimension mismatch");
  ClusterVector r = ybar;
  for (int i = 0; i < r.size(); ++i)
    for (int k = 0; k < r.dim; ++k)
      r.coords[static_cast<std::size_t>(i * r.dim + k)] += x[k];
  return r;
}

}  // namespace pcp
