#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "pcp/geometry.hpp"

using namespace pcp;

TEST_CASE("vector helpers and arithmetic") {
  Vec a = vec2(1.0, 2.0), b = vec2(-0.5, 4.0);
  CHECK((a + b)[0] == doctest::Approx(0.5));
  CHECK((a - b)[1] == doctest::Approx(-2.0));
  CHECK((2.0 * a)[1] == doctest::Approx(4.0));
  CHECK(dot(a, b) == doctest::Approx(1.0 * -0.5 + 2.0 * 4.0));
  CHECK(norm2(a) == doctest::Approx(5.0));
  CHECK(norm(vec1(-3.0)) == doctest::Approx(3.0));
  CHECK(dist_inf(a, b) == doctest::Approx(2.0));
  CHECK(vec3(1, 2, 3).dim == 3);
}

TEST_CASE("window membership is half-open") {
  Window w = window1(0.0, 1.0);
  CHECK(w.contains(vec1(0.0)));
  CHECK(!w.contains(vec1(1.0)));  // upper edge excluded
  CHECK(w.contains(vec1(0.999999)));
  CHECK(!w.contains(vec1(-1e-12)));
  CHECK(!w.contains_open(vec1(0.0)));
  CHECK(w.contains_open(vec1(0.5)));
  // Adjacent windows partition the line: no double counting at the seam.
  Window left = window1(-1.0, 0.0);
  CHECK(!left.contains(vec1(0.0)));
}

TEST_CASE("window geometry: volume, center, dilate, sides") {
  Window w = window2(0.0, 2.0, -1.0, 3.0);
  CHECK(w.volume() == doctest::Approx(8.0));
  CHECK(w.center()[0] == doctest::Approx(1.0));
  CHECK(w.center()[1] == doctest::Approx(1.0));
  CHECK(w.side(1) == doctest::Approx(4.0));
  Window d = w.dilate(0.5);
  CHECK(d.lower[0] == doctest::Approx(-0.5));
  CHECK(d.upper[1] == doctest::Approx(3.5));
  CHECK(d.volume() == doctest::Approx(15.0));
  CHECK(w.contains_box(window2(0.5, 1.0, 0.0, 1.0)));
  CHECK(!w.contains_box(window2(0.5, 2.5, 0.0, 1.0)));
}

TEST_CASE("box union, intersection, emptiness") {
  Window a = window1(0.0, 1.0), b = window1(2.0, 3.0);
  Window u = box_union(a, b);
  CHECK(u.lower[0] == doctest::Approx(0.0));
  CHECK(u.upper[0] == doctest::Approx(3.0));
  CHECK(box_empty(box_intersection(a, b)));
  Window c = window1(0.5, 2.5);
  Window i = box_intersection(a, c);
  CHECK(!box_empty(i));
  CHECK(i.lower[0] == doctest::Approx(0.5));
  CHECK(i.upper[0] == doctest::Approx(1.0));
}

TEST_CASE("cluster vectors store points flat") {
  ClusterVector y = cluster1({0.5, -1.0, 2.0});
  CHECK(y.size() == 3);
  CHECK(y.point(1)[0] == doctest::Approx(-1.0));
  y.set_point(1, vec1(7.0));
  CHECK(y.coords[1] == doctest::Approx(7.0));

  ClusterVector z;
  z.dim = 2;
  CHECK(z.empty());
  z.push_point(vec2(1.0, 2.0));
  z.push_point(vec2(3.0, 4.0));
  CHECK(z.size() == 2);
  CHECK(z.point(1)[1] == doctest::Approx(4.0));

  ClusterVector shifted = shift_cluster(y, vec1(10.0));
  CHECK(shifted.point(0)[0] == doctest::Approx(10.5));
  CHECK(shifted.point(2)[0] == doctest::Approx(12.0));
}

TEST_CASE("configurations merge coincident atoms into multiplicities") {
  Window w = window1(-5.0, 5.0);
  std::vector<Vec> pts = {vec1(1.0), vec1(2.0), vec1(1.0 + 1e-14), vec1(2.0),
                          vec1(2.0)};
  Configuration g = make_configuration(1, w, pts);
  CHECK(g.n_atoms() == 2);
  CHECK(g.total_points() == 5);
  long seen = 0;
  for (int a = 0; a < g.n_atoms(); ++a) {
    if (std::abs(g.atom(a)[0] - 1.0) < 1e-9)
      CHECK(g.multiplicity[static_cast<std::size_t>(a)] == 2);
    if (std::abs(g.atom(a)[0] - 2.0) < 1e-9)
      CHECK(g.multiplicity[static_cast<std::size_t>(a)] == 3);
    seen += g.multiplicity[static_cast<std::size_t>(a)];
  }
  CHECK(seen == 5);
}

TEST_CASE("projection forgets the cluster partition but keeps the multiset") {
  Window w = window1(-10.0, 10.0);
  ClusterVector c1 = cluster1({0.0, 1.0});
  ClusterVector c2 = cluster1({1.0, 4.0});
  ClusterVector vacuous;  // size 0; invisible after projection
  LiftedConfiguration gbar = make_lifted(1, w, {c1, c2, vacuous});
  CHECK(gbar.clusters.size() == 2);  // vacuous cluster dropped on construction

  Configuration g = project_lifted(gbar);
  CHECK(g.total_points() == 4);
  CHECK(count(g, window1(0.5, 10.0)) == 3);
  // the two copies of 1.0 from different clusters merge into multiplicity 2
  bool found_double = false;
  for (int a = 0; a < g.n_atoms(); ++a)
    if (std::abs(g.atom(a)[0] - 1.0) < 1e-9)
      found_double = g.multiplicity[static_cast<std::size_t>(a)] == 2;
  CHECK(found_double);

  Configuration first = project_vector(c1, w);
  CHECK(first.total_points() == 2);
}

TEST_CASE("degenerate projections and shifts") {
  Window w = window1(-10.0, 10.0);

  Configuration none = project_vector(ClusterVector{}, w);
  CHECK(none.n_atoms() == 0);
  CHECK(none.total_points() == 0);
  CHECK(count(none, w) == 0);

  Configuration empty = project_lifted(make_lifted(1, w, {}));
  CHECK(empty.n_atoms() == 0);

  // a singleton lifted configuration projects exactly like its only cluster
  ClusterVector c = cluster1({0.3, 0.3, -2.0});
  Configuration via_lifted = project_lifted(make_lifted(1, w, {c}));
  Configuration via_vector = project_vector(c, w);
  REQUIRE(via_lifted.n_atoms() == via_vector.n_atoms());
  for (int a = 0; a < via_lifted.n_atoms(); ++a) {
    CHECK(via_lifted.atom(a)[0] == via_vector.atom(a)[0]);
    CHECK(via_lifted.multiplicity[static_cast<std::size_t>(a)] ==
          via_vector.multiplicity[static_cast<std::size_t>(a)]);
  }

  ClusterVector vac;
  vac.dim = 1;
  CHECK(shift_cluster(vac, vec1(3.0)).empty());
  ClusterVector same = shift_cluster(c, vec1(0.0));
  CHECK(same.coords == c.coords);
  CHECK_THROWS(shift_cluster(c, vec2(1.0, 2.0)));
}

TEST_CASE("restriction to a window drops outside atoms") {
  Window w = window1(-10.0, 10.0);
  Configuration g = make_configuration(
      1, w, {vec1(-3.0), vec1(0.25), vec1(0.75), vec1(8.0)});
  Configuration r = restrict_to_window(g, window1(0.0, 1.0));
  CHECK(r.total_points() == 2);
  CHECK(count(r, window1(0.0, 1.0)) == 2);
  CHECK(count(g, window1(-4.0, 1.0)) == 3);
}
