#include "pcp/functions.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcp {

namespace {

// exp(-1/s) for s > 0, with the convention psi(s) = 0 for s <= 0. First and
// second derivatives: psi' = psi/s^2, psi'' = psi (1/s^4 - 2/s^3).
struct PsiEval {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

PsiEval psi_eval(double s) {
  PsiEval e;
  if (s <= 0.0) return e;
  const double v = std::exp(-1.0 / s);
  if (v == 0.0) return e;  // underflow region: all derivatives vanish too
  const double is = 1.0 / s;
  e.v = v;
  e.d1 = v * is * is;
  e.d2 = v * (is * is * is * is - 2.0 * is * is * is);
  return e;
}

// Transition T(s) = psi(s) / (psi(s) + psi(1-s)): 0 for s<=0, 1 for s>=1.
struct ProfileEval {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

ProfileEval transition(double s) {
  ProfileEval out;
  if (s <= 0.0) return out;
  if (s >= 1.0) {
    out.v = 1.0;
    return out;
  }
  const PsiEval p = psi_eval(s);
  const PsiEval q = psi_eval(1.0 - s);
  const double D = p.v + q.v;
  if (D == 0.0) return out;  // can't happen for s in (0,1) numerically
  const double D1 = p.d1 - q.d1;
  const double D2 = p.d2 + q.d2;
  const double T = p.v / D;
  const double T1 = p.d1 / D - p.v * D1 / (D * D);
  const double T2 = p.d2 / D - 2.0 * p.d1 * D1 / (D * D) -
                    p.v * D2 / (D * D) + 2.0 * p.v * D1 * D1 / (D * D * D);
  out.v = T;
  out.d1 = T1;
  out.d2 = T2;
  return out;
}

}  // namespace

enum class NodeKind { zero, bump, plateau, sum, product };

struct SmoothFnNode {
  NodeKind kind = NodeKind::zero;
  int dim = 1;
  Window support;
  bool nonneg = true;
  double sup = 0.0;

  // bump
  Vec center;
  double radius = 1.0;
  double amplitude = 1.0;

  // plateau
  Window box;
  double edge = 0.0;

  // combinators
  std::shared_ptr<const SmoothFnNode> left, right;
};

namespace {

FnEval eval_node(const SmoothFnNode& n, const Vec& x);

FnEval eval_bump(const SmoothFnNode& n, const Vec& x) {
  FnEval e;
  e.grad = Vec{{}, n.dim};
  double r2 = 0.0;
  for (int k = 0; k < n.dim; ++k) {
    const double d = x[k] - n.center[k];
    r2 += d * d;
  }
  const double u = r2 / (n.radius * n.radius);
  // Blown-up intermediate factors appear as u -> 1-; everything is < 1e-200
  // there anyway, so cut cleanly a bit before the exp underflow point.
  if (u >= 1.0 - 1e-3) return e;
  const double om = 1.0 - u;
  const double f = n.amplitude * std::exp(-1.0 / om);
  const double fu = -f / (om * om);
  const double fuu = f * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
  const double inv_r2 = 1.0 / (n.radius * n.radius);
  e.value = f;
  for (int k = 0; k < n.dim; ++k)
    e.grad[k] = fu * 2.0 * (x[k] - n.center[k]) * inv_r2;
  e.lap = fu * 2.0 * n.dim * inv_r2 + fuu * 4.0 * u * inv_r2;
  return e;
}

FnEval eval_plateau(const SmoothFnNode& n, const Vec& x) {
  FnEval e;
  e.grad = Vec{{}, n.dim};
  double p[kMaxDim], p1[kMaxDim], p2[kMaxDim];
  for (int k = 0; k < n.dim; ++k) {
    const double lo = n.box.lower[static_cast<std::size_t>(k)];
    const double hi = n.box.upper[static_cast<std::size_t>(k)];
    const double t = x[k];
    if (t <= lo || t >= hi) return e;
    ProfileEval pr;
    double sgn = 1.0;
    if (t < lo + n.edge) {
      pr = transition((t - lo) / n.edge);
    } else if (t > hi - n.edge) {
      pr = transition((hi - t) / n.edge);
      sgn = -1.0;
    } else {
      pr.v = 1.0;
    }
    p[k] = pr.v;
    p1[k] = sgn * pr.d1 / n.edge;
    p2[k] = pr.d2 / (n.edge * n.edge);
    if (pr.v == 0.0) return e;
  }
  double prod = n.amplitude;
  for (int k = 0; k < n.dim; ++k) prod *= p[k];
  e.value = prod;
  for (int k = 0; k < n.dim; ++k) {
    // product over the other dimensions times the k-th derivative
    double g = n.amplitude * p1[k];
    double l = n.amplitude * p2[k];
    for (int j = 0; j < n.dim; ++j) {
      if (j == k) continue;
      g *= p[j];
      l *= p[j];
    }
    e.grad[k] = g;
    e.lap += l;
  }
  return e;
}

FnEval eval_node(const SmoothFnNode& n, const Vec& x) {
  switch (n.kind) {
    case NodeKind::zero:
      return FnEval{0.0, Vec{{}, n.dim}, 0.0};
    case NodeKind::bump:
      return eval_bump(n, x);
    case NodeKind::plateau:
      return eval_plateau(n, x);
    case NodeKind::sum: {
      FnEval a = eval_node(*n.left, x);
      const FnEval b = eval_node(*n.right, x);
      a.value += b.value;
      for (int k = 0; k < n.dim; ++k) a.grad[k] += b.grad[k];
      a.lap += b.lap;
      return a;
    }
    case NodeKind::product: {
      if (!n.support.contains_open(x)) return FnEval{0.0, Vec{{}, n.dim}, 0.0};
      const FnEval a = eval_node(*n.left, x);
      const FnEval b = eval_node(*n.right, x);
      FnEval e;
      e.grad = Vec{{}, n.dim};
      e.value = a.value * b.value;
      double cross = 0.0;
      for (int k = 0; k < n.dim; ++k) {
        e.grad[k] = a.value * b.grad[k] + b.value * a.grad[k];
        cross += a.grad[k] * b.grad[k];
      }
      e.lap = a.lap * b.value + 2.0 * cross + a.value * b.lap;
      return e;
    }
  }
  return FnEval{};
}

}  // namespace

double SmoothFn::value(const Vec& x) const { return eval_all(x).value; }
Vec SmoothFn::gradient(const Vec& x) const { return eval_all(x).grad; }
double SmoothFn::laplacian(const Vec& x) const { return eval_all(x).lap; }

FnEval SmoothFn::eval_all(const Vec& x) const {
  if (!node_) throw std::logic_error("SmoothFn: empty handle");
  if (x.dim != node_->dim)
    throw std::invalid_argument("SmoothFn: dimension mismatch");
  if (!node_->support.contains_open(x))
    return FnEval{0.0, Vec{{}, node_->dim}, 0.0};
  return eval_node(*node_, x);
}

const Window& SmoothFn::support() const { return node_->support; }
int SmoothFn::dim() const { return node_->dim; }
bool SmoothFn::nonnegative() const { return node_->nonneg; }
double SmoothFn::sup_bound() const { return node_->sup; }
bool SmoothFn::is_zero() const { return node_->kind == NodeKind::zero; }

SmoothFn SmoothFn::zero(int dim) {
  auto n = std::make_shared<SmoothFnNode>();
  n->kind = NodeKind::zero;
  n->dim = dim;
  n->support = Window{{}, {}, dim};  // empty box
  n->nonneg = true;
  n->sup = 0.0;
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::bump(const Vec& center, double radius, double amplitude) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump: radius must be > 0");
  auto n = std::make_shared<SmoothFnNode>();
  n->kind = NodeKind::bump;
  n->dim = center.dim;
  n->center = center;
  n->radius = radius;
  n->amplitude = amplitude;
  Window w{{}, {}, center.dim};
  for (int k = 0; k < center.dim; ++k) {
    w.lower[static_cast<std::size_t>(k)] = center[k] - radius;
    w.upper[static_cast<std::size_t>(k)] = center[k] + radius;
  }
  n->support = w;
  n->nonneg = amplitude >= 0.0;
  n->sup = std::abs(amplitude) * std::exp(-1.0);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::plateau(const Window& box, double edge, double amplitude) {
  if (!(edge > 0.0)) throw std::invalid_argument("plateau: edge must be > 0");
  for (int k = 0; k < box.dim; ++k) {
    if (box.upper[static_cast<std::size_t>(k)] -
            box.lower[static_cast<std::size_t>(k)] <=
        2.0 * edge)
      throw std::invalid_argument(
          "plateau: box side must exceed twice the edge width");
  }
  auto n = std::make_shared<SmoothFnNode>();
  n->kind = NodeKind::plateau;
  n->dim = box.dim;
  n->box = box;
  n->edge = edge;
  n->amplitude = amplitude;
  n->support = box;
  n->nonneg = amplitude >= 0.0;
  n->sup = std::abs(amplitude);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::sum(const SmoothFn& a, const SmoothFn& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("SmoothFn::sum: dimension mismatch");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto n = std::make_shared<SmoothFnNode>();
  n->kind = NodeKind::sum;
  n->dim = a.dim();
  n->left = a.node_;
  n->right = b.node_;
  n->support = box_union(a.support(), b.support());
  n->nonneg = a.nonnegative() && b.nonnegative();
  n->sup = a.sup_bound() + b.sup_bound();
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::product(const SmoothFn& a, const SmoothFn& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("SmoothFn::product: dimension mismatch");
  if (a.is_zero() || b.is_zero()) return zero(a.dim());
  auto n = std::make_shared<SmoothFnNode>();
  n->kind = NodeKind::product;
  n->dim = a.dim();
  n->left = a.node_;
  n->right = b.node_;
  n->support = box_intersection(a.support(), b.support());
  n->nonneg = a.nonnegative() && b.nonnegative();
  n->sup = a.sup_bound() * b.sup_bound();
  if (box_empty(n->support)) return zero(a.dim());
  return SmoothFn(std::move(n));
}

double pair(const SmoothFn& f, const Configuration& g) {
  double acc = 0.0;
  for (int i = 0; i < g.n_atoms(); ++i)
    acc += static_cast<double>(g.multiplicity[static_cast<std::size_t>(i)]) *
           f.value(g.atom(i));
  return acc;
}

VectorField::VectorField(std::vector<SmoothFn> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("VectorField: needs at least one component");
  const int d = static_cast<int>(components_.size());
  for (const auto& c : components_)
    if (c.dim() != d)
      throw std::invalid_argument(
          "VectorField: component count must equal the ambient dimension");
  support_ = components_[0].support();
  for (std::size_t i = 1; i < components_.size(); ++i)
    support_ = box_union(support_, components_[i].support());
}

Vec VectorField::value(const Vec& x) const {
  Vec v{{}, dim()};
  for (int i = 0; i < dim(); ++i)
    v[i] = components_[static_cast<std::size_t>(i)].value(x);
  return v;
}

double VectorField::divergence(const Vec& x) const {
  double d = 0.0;
  for (int i = 0; i < dim(); ++i)
    d += components_[static_cast<std::size_t>(i)].gradient(x)[i];
  return d;
}

Vec VectorField::component_gradient(int i, const Vec& x) const {
  return components_[static_cast<std::size_t>(i)].gradient(x);
}

OuterEval outer_eval(OuterKind k, double s) {
  OuterEval e;
  switch (k) {
    case OuterKind::linear:
      e.g = s;
      e.dg = 1.0;
      e.d2g = 0.0;
      break;
    case OuterKind::tanh_s: {
      const double t = std::tanh(s);
      e.g = t;
      e.dg = 1.0 - t * t;
      e.d2g = -2.0 * t * (1.0 - t * t);
      break;
    }
    case OuterKind::sine:
      e.g = std::sin(s);
      e.dg = std::cos(s);
      e.d2g = -e.g;
      break;
    case OuterKind::gauss: {
      const double v = std::exp(-s * s);
      e.g = v;
      e.dg = -2.0 * s * v;
      e.d2g = (4.0 * s * s - 2.0) * v;
      break;
    }
    case OuterKind::tanh_poly: {
      const double w = s + s * s * s / 3.0;
      const double w1 = 1.0 + s * s;
      const double w2 = 2.0 * s;
      const double t = std::tanh(w);
      const double sech2 = 1.0 - t * t;
      e.g = t;
      e.dg = sech2 * w1;
      e.d2g = sech2 * w2 - 2.0 * t * sech2 * w1 * w1;
      break;
    }
  }
  return e;
}

CylinderFn::CylinderFn(std::vector<SmoothFn> inner,
                       std::vector<CylinderTerm> terms)
    : inner_(std::move(inner)), terms_(std::move(terms)) {
  if (inner_.empty())
    throw std::invalid_argument("CylinderFn: needs at least one inner function");
  const int d = inner_[0].dim();
  for (const auto& f : inner_)
    if (f.dim() != d)
      throw std::invalid_argument("CylinderFn: inner dimension mismatch");
  for (const auto& t : terms_)
    if (t.a.size() != inner_.size())
      throw std::invalid_argument(
          "CylinderFn: term coefficient count must match inner count");
  inner_support_ = inner_[0].support();
  for (std::size_t i = 1; i < inner_.size(); ++i)
    inner_support_ = box_union(inner_support_, inner_[i].support());
}

int CylinderFn::dim() const { return inner_[0].dim(); }

double CylinderFn::eval(const Configuration& g) const {
  std::vector<double> u(inner_.size());
  for (std::size_t m = 0; m < inner_.size(); ++m) u[m] = pair(inner_[m], g);
  double val = 0.0;
  for (const auto& t : terms_) {
    double s = t.b;
    for (std::size_t m = 0; m < u.size(); ++m) s += t.a[m] * u[m];
    val += t.c * outer_eval(t.kind, s).g;
  }
  return val;
}

CylinderFn::Frame CylinderFn::bind(const Configuration& g) const {
  Frame fr;
  fr.fn = this;
  const std::size_t k = inner_.size();
  fr.u.assign(k, 0.0);
  fr.df.assign(k, 0.0);
  fr.d2f.assign(k * k, 0.0);
  for (std::size_t m = 0; m < k; ++m) fr.u[m] = pair(inner_[m], g);
  for (const auto& t : terms_) {
    double s = t.b;
    for (std::size_t m = 0; m < k; ++m) s += t.a[m] * fr.u[m];
    const OuterEval oe = outer_eval(t.kind, s);
    fr.value += t.c * oe.g;
    for (std::size_t m = 0; m < k; ++m) {
      fr.df[m] += t.c * oe.dg * t.a[m];
      for (std::size_t l = 0; l < k; ++l)
        fr.d2f[m * k + l] += t.c * oe.d2g * t.a[m] * t.a[l];
    }
  }
  return fr;
}

Vec CylinderFn::Frame::grad_at(const Vec& x) const {
  const auto& inner = fn->inner();
  Vec gvec{{}, fn->dim()};
  for (std::size_t m = 0; m < inner.size(); ++m) {
    if (df[m] == 0.0) continue;
    const Vec gm = inner[m].gradient(x);
    for (int c = 0; c < fn->dim(); ++c) gvec[c] += df[m] * gm[c];
  }
  return gvec;
}

double CylinderFn::Frame::lap_at(const Vec& x) const {
  const auto& inner = fn->inner();
  const std::size_t k = inner.size();
  std::vector<FnEval> ev(k);
  for (std::size_t m = 0; m < k; ++m) ev[m] = inner[m].eval_all(x);
  double lap = 0.0;
  for (std::size_t m = 0; m < k; ++m) {
    lap += df[m] * ev[m].lap;
    for (std::size_t l = 0; l < k; ++l) {
      const double h = d2f[m * k + l];
      if (h == 0.0) continue;
      lap += h * dot(ev[m].grad, ev[l].grad);
    }
  }
  return lap;
}

double cylinder_eval(const CylinderFn& F, const Configuration& g) {
  return F.eval(g);
}

namespace {
void check_atom_index(const Configuration& g, int atom_index) {
  if (atom_index < 0 || atom_index >= g.n_atoms())
    throw std::out_of_range("cylinder derivative: atom index " +
                            std::to_string(atom_index) +
                            " out of range for configuration with " +
                            std::to_string(g.n_atoms()) + " atoms");
}
}  // namespace

Vec cylinder_gradient(const CylinderFn& F, const Configuration& g,
                      int atom_index) {
  check_atom_index(g, atom_index);
  return F.bind(g).grad_at(g.atom(atom_index));
}

double cylinder_laplacian(const CylinderFn& F, const Configuration& g,
                          int atom_index) {
  check_atom_index(g, atom_index);
  return F.bind(g).lap_at(g.atom(atom_index));
}

CompactDiffeo::CompactDiffeo(SmoothFn bump, const Vec& direction, double eps)
    : bump_(std::move(bump)), direction_(direction), eps_(eps) {
  if (bump_.dim() != direction.dim)
    throw std::invalid_argument("CompactDiffeo: dimension mismatch");
  const double dn = norm(direction_);
  if (!(dn > 0.0))
    throw std::invalid_argument("CompactDiffeo: direction must be nonzero");
  for (int k = 0; k < direction_.dim; ++k) direction_[k] /= dn;
  support_ = bump_.support();

  // Estimate Lip(b) = sup |grad b| on a grid over the support; the map is a
  // diffeomorphism iff |eps| * Lip(b) < 1.
  double max_grad = 0.0;
  const int n = 64;
  const int d = bump_.dim();
  long total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    Vec x{{}, d};
    for (int k = 0; k < d; ++k) {
      const long j = rem % n;
      rem /= n;
      const double lo = support_.lower[static_cast<std::size_t>(k)];
      const double hi = support_.upper[static_cast<std::size_t>(k)];
      x[k] = lo + (hi - lo) * (static_cast<double>(j) + 0.5) /
                      static_cast<double>(n);
    }
    const double gnorm = norm(bump_.gradient(x));
    if (gnorm > max_grad) max_grad = gnorm;
  }
  lip_ = 1.05 * max_grad;  // safety margin over the grid maximum
  if (std::abs(eps_) * lip_ >= 1.0)
    throw std::invalid_argument(
        "CompactDiffeo: |eps| * Lip(bump) must be < 1 (got " +
        std::to_string(std::abs(eps_) * lip_) + ")");
}

CompactDiffeo CompactDiffeo::identity(int dim) {
  Vec c{{}, dim};
  Vec u{{}, dim};
  u[0] = 1.0;
  return CompactDiffeo(SmoothFn::bump(c, 1.0, 1.0), u, 0.0);
}

Vec CompactDiffeo::forward_base(const Vec& x) const {
  const double b = bump_.value(x);
  Vec y = x;
  for (int k = 0; k < x.dim; ++k) y[k] += eps_ * b * direction_[k];
  return y;
}

Vec CompactDiffeo::inverse_base(const Vec& y) const {
  // Solve x = y - eps b(x) u by fixed point; contraction factor |eps| Lip(b).
  Vec x = y;
  for (int it = 0; it < 200; ++it) {
    const double b = bump_.value(x);
    Vec xn = y;
    for (int k = 0; k < y.dim; ++k) xn[k] -= eps_ * b * direction_[k];
    double delta = 0.0;
    for (int k = 0; k < y.dim; ++k) delta += std::abs(xn[k] - x[k]);
    x = xn;
    if (delta < 1e-15) break;
  }
  return x;
}

double CompactDiffeo::jacobian_base(const Vec& x) const {
  // Rank-one update determinant: det(I + eps u grad b^T) = 1 + eps grad b . u
  return 1.0 + eps_ * dot(bump_.gradient(x), direction_);
}

Vec CompactDiffeo::apply(const Vec& x) const {
  return inverted_ ? inverse_base(x) : forward_base(x);
}

Vec CompactDiffeo::inverse(const Vec& x) const {
  return inverted_ ? forward_base(x) : inverse_base(x);
}

double CompactDiffeo::jacobian(const Vec& x) const {
  if (!inverted_) return jacobian_base(x);
  // d(phi^-1)/dx at x has determinant 1 / J_phi(phi^-1(x)).
  return 1.0 / jacobian_base(inverse_base(x));
}

CompactDiffeo CompactDiffeo::inverted() const {
  CompactDiffeo inv = *this;
  inv.inverted_ = !inverted_;
  return inv;
}

ClusterVector lift_diffeo(const CompactDiffeo& phi, const ClusterVector& xbar) {
  if (phi.dim() != xbar.dim)
    throw std::invalid_argument("lift_diffeo: dimension mismatch");
  ClusterVector out = xbar;
  for (int i = 0; i < xbar.size(); ++i) out.set_point(i, phi.apply(xbar.point(i)));
  return out;
}

Configuration apply_diffeo_config(const CompactDiffeo& phi,
                                  const Configuration& g) {
  if (phi.dim() != g.dim)
    throw std::invalid_argument("apply_diffeo_config: dimension mismatch");
  std::vector<Vec> pts;
  for (int i = 0; i < g.n_atoms(); ++i) {
    const Vec y = phi.apply(g.atom(i));
    for (long m = 0; m < g.multiplicity[static_cast<std::size_t>(i)]; ++m)
      pts.push_back(y);
  }
  return make_configuration(g.dim, g.window, pts);
}

}  // namespace pcp
