#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcp/functions.hpp"

using namespace pcp;

namespace {

// Central-difference gradient and Laplacian used as the independent check on
// every analytic derivative in the function catalog.
Vec fd_gradient(const SmoothFn& f, const Vec& x, double h = 1e-5) {
  Vec g;
  g.dim = x.dim;
  for (int c = 0; c < x.dim; ++c) {
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    g[c] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return g;
}

double fd_laplacian(const SmoothFn& f, const Vec& x, double h = 1e-4) {
  double lap = 0.0;
  const double f0 = f.value(x);
  for (int c = 0; c < x.dim; ++c) {
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    lap += (f.value(xp) - 2.0 * f0 + f.value(xm)) / (h * h);
  }
  return lap;
}

void check_derivatives(const SmoothFn& f, const Vec& x) {
  const Vec g = f.gradient(x);
  const Vec gfd = fd_gradient(f, x);
  for (int c = 0; c < x.dim; ++c)
    CHECK(g[c] == doctest::Approx(gfd[c]).epsilon(1e-5).scale(1.0));
  CHECK(f.laplacian(x) ==
        doctest::Approx(fd_laplacian(f, x)).epsilon(1e-3).scale(1.0));
  FnEval e = f.eval_all(x);
  CHECK(e.value == doctest::Approx(f.value(x)));
  CHECK(e.grad[0] == doctest::Approx(g[0]));
  CHECK(e.lap == doctest::Approx(f.laplacian(x)));
}

}  // namespace

TEST_CASE("bump profile values and smoothness at the edge") {
  SmoothFn b = SmoothFn::bump(vec1(0.0), 1.0, 2.0);
  CHECK(b.value(vec1(0.0)) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(b.value(vec1(1.0)) == 0.0);
  CHECK(b.value(vec1(1.0 + 1e-9)) == 0.0);
  CHECK(b.value(vec1(-2.0)) == 0.0);
  CHECK(b.gradient(vec1(1.2))[0] == 0.0);
  CHECK(b.nonnegative());
  CHECK(b.sup_bound() >= 2.0 * std::exp(-1.0));
  CHECK(b.support().lower[0] == doctest::Approx(-1.0));
  CHECK(b.support().upper[0] == doctest::Approx(1.0));
  for (double x : {0.0, 0.3, -0.62, 0.95, 0.999})
    check_derivatives(b, vec1(x));
}

TEST_CASE("plateau holds its level on the inner box") {
  const double ln2 = 0.6931471805599453;
  SmoothFn p = SmoothFn::plateau(window1(-1.0, 1.0), 0.25, ln2);
  CHECK(p.value(vec1(0.0)) == doctest::Approx(ln2).epsilon(1e-15));
  CHECK(p.value(vec1(0.74)) == doctest::Approx(ln2).epsilon(1e-15));
  CHECK(p.value(vec1(1.0)) == 0.0);
  CHECK(p.value(vec1(0.999)) > 0.0);
  CHECK(p.gradient(vec1(0.0))[0] == 0.0);  // flat interior
  for (double x : {0.8, 0.9, -0.77, -0.99}) check_derivatives(p, vec1(x));
}

TEST_CASE("sums and products keep analytic derivatives consistent") {
  SmoothFn a = SmoothFn::bump(vec1(0.0), 1.0, 1.0);
  SmoothFn b = SmoothFn::bump(vec1(0.5), 0.8, 0.7);
  SmoothFn s = SmoothFn::sum(a, b);
  SmoothFn pr = SmoothFn::product(a, b);
  for (double x : {-0.4, 0.1, 0.45, 0.9}) {
    CHECK(s.value(vec1(x)) ==
          doctest::Approx(a.value(vec1(x)) + b.value(vec1(x))).epsilon(1e-14));
    CHECK(pr.value(vec1(x)) ==
          doctest::Approx(a.value(vec1(x)) * b.value(vec1(x))).epsilon(1e-14));
    check_derivatives(s, vec1(x));
    check_derivatives(pr, vec1(x));
  }
  CHECK(SmoothFn::zero(2).is_zero());
  CHECK(SmoothFn::zero(2).value(vec2(0.1, 0.2)) == 0.0);
}

TEST_CASE("two-dimensional bump derivatives") {
  SmoothFn b = SmoothFn::bump(vec2(0.2, -0.1), 1.1, 0.9);
  for (auto xy : {vec2(0.2, -0.1), vec2(0.5, 0.3), vec2(-0.4, -0.6)})
    check_derivatives(b, xy);
}

TEST_CASE("pairing against a configuration") {
  SmoothFn f = SmoothFn::bump(vec1(0.0), 1.0, 1.0);
  Window w = window1(-5.0, 5.0);
  Configuration g =
      make_configuration(1, w, {vec1(0.0), vec1(0.0), vec1(0.5), vec1(3.0)});
  const double expected = 2.0 * f.value(vec1(0.0)) + f.value(vec1(0.5));
  CHECK(pair(f, g) == doctest::Approx(expected).epsilon(1e-14));

  // the empty configuration pairs to 0 with any test function
  Configuration empty = make_configuration(1, w, {});
  CHECK(pair(f, empty) == 0.0);

  // a plateau that is exactly 1 on [-0.75,0.75] counts atoms deep inside: 3.0
  SmoothFn one = SmoothFn::plateau(window1(-1.0, 1.0), 0.25, 1.0);
  Configuration three =
      make_configuration(1, w, {vec1(-0.5), vec1(0.0), vec1(0.7)});
  CHECK(pair(one, three) == doctest::Approx(3.0).epsilon(1e-14));

  // pairing is additive over disjoint pieces
  Configuration left = make_configuration(1, w, {vec1(-0.5), vec1(0.0)});
  Configuration right = make_configuration(1, w, {vec1(0.7)});
  CHECK(pair(one, left) + pair(one, right) ==
        doctest::Approx(pair(one, three)).epsilon(1e-14));
}

TEST_CASE("vector field value and divergence") {
  VectorField v({SmoothFn::bump(vec2(0.0, 0.0), 1.0, 0.5),
                 SmoothFn::bump(vec2(0.3, 0.0), 0.9, 0.4)});
  CHECK(v.dim() == 2);
  const Vec x = vec2(0.25, -0.2);
  CHECK(v.value(x)[0] == doctest::Approx(v.component(0).value(x)));
  CHECK(v.value(x)[1] == doctest::Approx(v.component(1).value(x)));
  // divergence = d v0/dx + d v1/dy by finite differences
  const double h = 1e-5;
  Vec xp = x, xm = x, yp = x, ym = x;
  xp[0] += h;
  xm[0] -= h;
  yp[1] += h;
  ym[1] -= h;
  const double fd =
      (v.component(0).value(xp) - v.component(0).value(xm)) / (2 * h) +
      (v.component(1).value(yp) - v.component(1).value(ym)) / (2 * h);
  CHECK(v.divergence(x) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
}

TEST_CASE("cylinder functions: frame, gradient, Laplacian") {
  std::vector<SmoothFn> inner = {SmoothFn::bump(vec1(0.0), 1.0, 1.0),
                                 SmoothFn::bump(vec1(0.5), 0.8, 0.7)};
  std::vector<CylinderTerm> terms = {
      CylinderTerm{OuterKind::tanh_s, {1.0, -0.4}, 0.1, 0.8},
      CylinderTerm{OuterKind::gauss, {0.3, 0.5}, -0.2, 0.6}};
  CylinderFn F(inner, terms);
  CHECK(F.n_inner() == 2);

  Window w = window1(-5.0, 5.0);
  Configuration g = make_configuration(
      1, w, {vec1(-0.2), vec1(0.3), vec1(0.3), vec1(0.7), vec1(4.0)});

  // value through the frame equals direct evaluation
  CylinderFn::Frame fr = F.bind(g);
  CHECK(fr.value == doctest::Approx(F.eval(g)).epsilon(1e-14));
  CHECK(cylinder_eval(F, g) == doctest::Approx(F.eval(g)));

  // per-atom (per-copy) gradient against finite differences in the atom
  // position; moving the atom moves all of its multiplicity copies, so the
  // finite difference sees mult * grad.
  for (int a = 0; a < g.n_atoms(); ++a) {
    const Vec grad = cylinder_gradient(F, g, a);
    CHECK(fr.grad_at(g.atom(a))[0] == doctest::Approx(grad[0]).epsilon(1e-12));
    const double h = 1e-6;
    Configuration gp = g, gm = g;
    gp.locations[static_cast<std::size_t>(a)] += h;
    gm.locations[static_cast<std::size_t>(a)] -= h;
    const double fd = (F.eval(gp) - F.eval(gm)) / (2.0 * h);
    const double mult =
        static_cast<double>(g.multiplicity[static_cast<std::size_t>(a)]);
    CHECK(mult * grad[0] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }

  // atoms outside every inner support do not contribute
  const int last = g.n_atoms() - 1;
  CHECK(cylinder_gradient(F, g, last)[0] == 0.0);
  CHECK(cylinder_laplacian(F, g, last) == 0.0);
  CHECK_THROWS((void)cylinder_gradient(F, g, 99));
}

TEST_CASE("cylinder locality: atoms outside inner supports are invisible") {
  CylinderFn F({SmoothFn::bump(vec1(0.0), 1.0, 1.0)},
               {CylinderTerm{OuterKind::sine, {1.0}, 0.3, 1.0}});
  Window w = window1(-10.0, 10.0);
  Configuration a = make_configuration(1, w, {vec1(0.2), vec1(-0.5)});
  Configuration b =
      make_configuration(1, w, {vec1(0.2), vec1(-0.5), vec1(7.0), vec1(-3.0)});
  CHECK(F.eval(a) == doctest::Approx(F.eval(b)).epsilon(1e-15));
}

TEST_CASE("outer profiles have correct first and second derivatives") {
  for (OuterKind k : {OuterKind::linear, OuterKind::tanh_s, OuterKind::sine,
                      OuterKind::gauss, OuterKind::tanh_poly}) {
    for (double s : {-0.8, -0.1, 0.0, 0.4, 1.3}) {
      OuterEval e = outer_eval(k, s);
      const double h = 1e-5;
      const double d_fd =
          (outer_eval(k, s + h).g - outer_eval(k, s - h).g) / (2 * h);
      const double d2_fd = (outer_eval(k, s + h).g - 2 * e.g +
                            outer_eval(k, s - h).g) /
                           (h * h);
      CHECK(e.dg == doctest::Approx(d_fd).epsilon(1e-6).scale(1.0));
      CHECK(e.d2g == doctest::Approx(d2_fd).epsilon(1e-3).scale(1.0));
    }
  }
}

TEST_CASE("compact diffeomorphism: inverse, Jacobian, locality") {
  CompactDiffeo phi(SmoothFn::bump(vec1(0.0), 1.0, 1.0), vec1(1.0), 0.15);

  for (double x : {-0.9, -0.3, 0.0, 0.4, 0.85, 2.0}) {
    const Vec y = phi.apply(vec1(x));
    // inverse composition to near machine precision
    CHECK(phi.inverse(y)[0] == doctest::Approx(x).epsilon(1e-12));
    // analytic Jacobian vs finite differences
    const double h = 1e-6;
    const double fd =
        (phi.apply(vec1(x + h))[0] - phi.apply(vec1(x - h))[0]) / (2 * h);
    CHECK(phi.jacobian(vec1(x)) == doctest::Approx(fd).epsilon(1e-6));
  }
  // identity outside the bump support
  CHECK(phi.apply(vec1(3.0))[0] == 3.0);
  CHECK(phi.jacobian(vec1(3.0)) == 1.0);

  CompactDiffeo psi = phi.inverted();
  CHECK(psi.is_inverted());
  const Vec x0 = vec1(0.37);
  CHECK(psi.apply(phi.apply(x0))[0] == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(psi.jacobian(phi.apply(x0)) ==
        doctest::Approx(1.0 / phi.jacobian(x0)).epsilon(1e-10));

  CompactDiffeo id = CompactDiffeo::identity(1);
  CHECK(id.apply(vec1(1.7))[0] == 1.7);
  CHECK(id.jacobian(vec1(1.7)) == 1.0);

  // contraction bound: a displacement with eps * Lip >= 1 must be rejected
  CHECK_THROWS(CompactDiffeo(SmoothFn::bump(vec1(0.0), 1.0, 1.0), vec1(1.0),
                             10.0));
}

TEST_CASE("diffeomorphism lifts to cluster vectors and configurations") {
  CompactDiffeo phi(SmoothFn::bump(vec1(0.0), 1.0, 1.0), vec1(1.0), 0.1);
  ClusterVector y = cluster1({0.2, 5.0});
  ClusterVector z = lift_diffeo(phi, y);
  CHECK(z.point(0)[0] == doctest::Approx(phi.apply(vec1(0.2))[0]));
  CHECK(z.point(1)[0] == 5.0);  // outside supp phi: untouched

  Window w = window1(-10.0, 10.0);
  Configuration g = make_configuration(1, w, {vec1(0.2), vec1(0.2), vec1(5.0)});
  Configuration gm = apply_diffeo_config(phi, g);
  CHECK(gm.total_points() == 3);
  bool moved = false;
  for (int a = 0; a < gm.n_atoms(); ++a)
    if (std::abs(gm.atom(a)[0] - phi.apply(vec1(0.2))[0]) < 1e-12)
      moved = gm.multiplicity[static_cast<std::size_t>(a)] == 2;
  CHECK(moved);

  // identity leaves both levels untouched
  CompactDiffeo id = CompactDiffeo::identity(1);
  CHECK(lift_diffeo(id, y).coords == y.coords);
  Configuration gid = apply_diffeo_config(id, g);
  REQUIRE(gid.n_atoms() == g.n_atoms());
  for (int a = 0; a < gid.n_atoms(); ++a) CHECK(gid.atom(a)[0] == g.atom(a)[0]);
}

TEST_CASE("diffeomorphisms commute with projection") {
  // moving points cluster-by-cluster and then projecting gives the same
  // configuration as projecting first and moving atoms
  CompactDiffeo phi(SmoothFn::bump(vec1(0.3), 1.2, 1.0), vec1(-1.0), 0.12);
  Window w = window1(-10.0, 10.0);
  std::vector<ClusterVector> clusters = {cluster1({0.2, 0.9}),
                                         cluster1({-0.4, 0.2, 6.0}),
                                         cluster1({3.3})};
  LiftedConfiguration gbar = make_lifted(1, w, clusters);

  std::vector<ClusterVector> mapped;
  for (const ClusterVector& c : gbar.clusters)
    mapped.push_back(lift_diffeo(phi, c));
  Configuration lhs = apply_diffeo_config(phi, project_lifted(gbar));
  Configuration rhs = project_lifted(make_lifted(1, w, mapped));

  REQUIRE(lhs.n_atoms() == rhs.n_atoms());
  for (int a = 0; a < lhs.n_atoms(); ++a) {
    CHECK(lhs.atom(a)[0] == doctest::Approx(rhs.atom(a)[0]).epsilon(1e-14));
    CHECK(lhs.multiplicity[static_cast<std::size_t>(a)] ==
          rhs.multiplicity[static_cast<std::size_t>(a)]);
  }
  CHECK(lhs.total_points() == 6);
}
