#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include "bcz/common.hpp"

namespace bcz {

inline constexpr int kMaxDim = 3;

struct Point {
  std::array<double, kMaxDim> x{0.0, 0.0, 0.0};
  int dim = 1;

  Point() = default;
  Point(std::initializer_list<double> coords) {
    dim = 0;
    for (double c : coords) x[dim++] = c;
  }
  static Point zero(int n) {
    Point p;
    p.dim = n;
    return p;
  }
  double operator[](int i) const { return x[i]; }
  double& operator[](int i) { return x[i]; }
};

inline double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    const double d = a.x[i] - b.x[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double dist_inf(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s = std::max(s, std::abs(a.x[i] - b.x[i]));
  return s;
}

inline bool same_point(const Point& a, const Point& b) {
  for (int i = 0; i < a.dim; ++i)
    if (a.x[i] != b.x[i]) return false;
  return true;
}

// Axis-aligned cube.  Half-open [lo,hi) by default, matching dyadic grids;
// the closed flag switches to [lo,hi] where a construction needs it.
struct Cube {
  Point center;
  double halfside = 0.0;
  bool closed = false;

  Cube() = default;
  Cube(Point c, double h, bool cl = false) : center(c), halfside(h), closed(cl) {}

  int dim() const { return center.dim; }
  double side() const { return 2.0 * halfside; }
  double lo(int i) const { return center.x[i] - halfside; }
  double hi(int i) const { return center.x[i] + halfside; }

  Cube scaled(double a) const { return Cube(center, a * halfside, closed); }

  bool contains(const Point& p) const {
    for (int i = 0; i < dim(); ++i) {
      if (p.x[i] < lo(i)) return false;
      if (closed ? (p.x[i] > hi(i)) : (p.x[i] >= hi(i))) return false;
    }
    return true;
  }

  // Euclidean distance from p to the closed cube (0 inside).
  double dist_to(const Point& p) const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double g = 0.0;
      if (p.x[i] < lo(i)) g = lo(i) - p.x[i];
      else if (p.x[i] > hi(i)) g = p.x[i] - hi(i);
      s += g * g;
    }
    return std::sqrt(s);
  }

  // Distance to the boundary of the cube: inner margin inside, dist_to outside.
  double boundary_dist(const Point& p) const {
    bool inside = true;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) {
      if (p.x[i] < lo(i) || p.x[i] > hi(i)) inside = false;
      margin = std::min(margin, std::min(p.x[i] - lo(i), hi(i) - p.x[i]));
    }
    return inside ? margin : dist_to(p);
  }

  bool contains_cube(const Cube& q) const {
    for (int i = 0; i < dim(); ++i)
      if (q.lo(i) < lo(i) || q.hi(i) > hi(i)) return false;
    return true;
  }
};

// Euclidean gap between two closed cubes (0 when they touch or overlap).
inline double dist(const Cube& q, const Cube& r) {
  double s = 0.0;
  for (int i = 0; i < q.dim(); ++i) {
    const double g = std::max({0.0, r.lo(i) - q.hi(i), q.lo(i) - r.hi(i)});
    s += g * g;
  }
  return std::sqrt(s);
}

// D(Q,R) = d(Q,R) + l(Q) + l(R), the long distance.
inline double long_distance(const Cube& q, const Cube& r) {
  return dist(q, r) + q.side() + r.side();
}

// Distance from the cube q to the boundary of r.
inline double dist_to_boundary(const Cube& q, const Cube& r) {
  bool disjoint = false;
  double gap2 = 0.0;
  for (int i = 0; i < q.dim(); ++i) {
    const double g = std::max({0.0, r.lo(i) - q.hi(i), q.lo(i) - r.hi(i)});
    if (g > 0.0) disjoint = true;
    gap2 += g * g;
  }
  if (disjoint) return std::sqrt(gap2);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < q.dim(); ++i)
    margin = std::min(margin, std::min(q.lo(i) - r.lo(i), r.hi(i) - q.hi(i)));
  return std::max(0.0, margin);
}

struct Ball {
  Point center;
  double radius = 0.0;
  bool open = true;

  bool contains(const Point& p) const {
    const double d = dist(center, p);
    return open ? d < radius : d <= radius;
  }
};

}  // namespace bcz
