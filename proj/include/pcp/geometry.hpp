#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pcp {

inline constexpr int kMaxDim = 3;

// Point of R^d, d <= kMaxDim. Fixed storage keeps configurations and cluster
// vectors allocation-light in the sampling and dynamics loops.
struct Vec {
  std::array<double, kMaxDim> c{{0.0, 0.0, 0.0}};
  int dim = 1;

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
};

Vec vec1(double x);
Vec vec2(double x, double y);
Vec vec3(double x, double y, double z);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm(const Vec& a);
// max-norm distance; used by the atom merge tolerance
double dist_inf(const Vec& a, const Vec& b);

// Axis-aligned box. Membership is half-open, [lower, upper), so disjoint
// adjacent windows never double count an atom.
struct Window {
  std::array<double, kMaxDim> lower{{0.0, 0.0, 0.0}};
  std::array<double, kMaxDim> upper{{0.0, 0.0, 0.0}};
  int dim = 1;
  double merge_tol = 1e-12;

  bool contains(const Vec& p) const;
  bool contains_open(const Vec& p) const;  // strict interior
  bool contains_box(const Window& inner) const;
  double volume() const;
  Vec center() const;
  Window dilate(double r) const;  // componentwise inflation by r
  double side(int i) const { return upper[static_cast<std::size_t>(i)] -
                                    lower[static_cast<std::size_t>(i)]; }
};

Window window1(double lo, double hi, double merge_tol = 1e-12);
Window window2(double lx, double hx, double ly, double hy,
               double merge_tol = 1e-12);
// Smallest box containing both (dims must match).
Window box_union(const Window& a, const Window& b);
// Intersection; empty() is true when the boxes do not overlap.
Window box_intersection(const Window& a, const Window& b);
bool box_empty(const Window& w);

// Ordered tuple of cluster points, one element of the disjoint union over
// sizes n >= 0 (n = 0 is the vacuous cluster). Coordinates are stored flat,
// point i occupying [i*dim, (i+1)*dim).
struct ClusterVector {
  int dim = 1;
  std::vector<double> coords;

  int size() const { return static_cast<int>(coords.size()) / dim; }
  bool empty() const { return coords.empty(); }
  Vec point(int i) const;
  void set_point(int i, const Vec& p);
  void push_point(const Vec& p);
};

ClusterVector cluster1(std::initializer_list<double> xs);  // d = 1 helper

// Finite point configuration with multiplicities, observed in a window.
// Atoms closer than window.merge_tol (max-norm) are merged on construction.
struct Configuration {
  int dim = 1;
  Window window;
  std::vector<double> locations;  // flat, distinct atom positions
  std::vector<int> multiplicity;

  int n_atoms() const { return static_cast<int>(multiplicity.size()); }
  Vec atom(int i) const;
  long total_points() const;
};

// Builds a configuration from raw points, merging within tolerance.
Configuration make_configuration(int dim, const Window& window,
                                 const std::vector<Vec>& points);

// Finite configuration of cluster vectors. Vacuous (size-0) clusters are
// dropped on construction: they are invisible after projection.
struct LiftedConfiguration {
  int dim = 1;
  Window window;  // observation window on the base space
  std::vector<ClusterVector> clusters;
};

LiftedConfiguration make_lifted(int dim, const Window& window,
                                std::vector<ClusterVector> clusters);

// --- projection and counting -------------------------------------------------

// Unpacks one cluster vector into the multiset of its points.
Configuration project_vector(const ClusterVector& xbar, const Window& window);

// Multiset union of project_vector over all clusters.
Configuration project_lifted(const LiftedConfiguration& gbar);

// Restriction of a configuration to a window (atoms outside are dropped).
Configuration restrict_to_window(const Configuration& g, const Window& w);

// Sum of multiplicities over atoms inside B.
long count(const Configuration& g, const Window& B);

// (y_1 + x, ..., y_n + x); dimension mismatch is an error.
ClusterVector shift_cluster(const ClusterVector& ybar, const Vec& x);

}  // namespace pcp
