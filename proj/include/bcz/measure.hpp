#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcz/common.hpp"
#include "bcz/geometry.hpp"

namespace bcz {

struct Atom {
  Point p;
  cplx w;
};

// Finite atomic measure with a mandatory resolution scale.  A finite atom set
// is never of order m below the atom separation, so every growth/operator
// query quantifies only over scales >= resolution().
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  AtomicMeasure(int dim, double resolution, std::vector<Atom> atoms);

  int dim() const { return dim_; }
  double resolution() const { return resolution_; }
  bool nonneg() const { return nonneg_; }
  size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(size_t i) const { return atoms_[i]; }

  double total_variation() const;
  cplx total() const;

  // Sum of weights over a region.  Balls are open unless flagged otherwise;
  // cube membership follows the cube's own open/closed convention.
  cplx mass_ball(const Point& c, double r, bool open = true) const;
  cplx mass_cube(const Cube& q) const;
  // mass of {x in 2Q : dist(x, boundary of Q) <= lambda * l(Q)}
  cplx mass_strip(const Cube& q, double lambda) const;

  AtomicMeasure restricted(const std::function<bool(const Point&)>& keep) const;
  AtomicMeasure restricted_to(const Cube& q) const;
  // same atom list, weights multiplied by f (pointwise); used for f d(mu)
  AtomicMeasure weighted(const std::vector<cplx>& f) const;
  AtomicMeasure normalized() const;

  double min_separation() const;  // +inf for fewer than two atoms
  Cube bounding_cube(double pad = 0.0) const;
  double diameter() const;

  std::string to_json() const;
  static AtomicMeasure from_json(const std::string& text);

 private:
  int dim_ = 1;
  double resolution_ = 1.0;
  bool nonneg_ = true;
  std::vector<Atom> atoms_;
};

struct GrowthCertificate {
  double m = 0.0;
  double r_min = 0.0;
  double constant = 0.0;
};

// Exact sup of mu(B(x,r))/r^m over atom-centred balls (plus optional query
// centres) and r >= r_min, computed over the distance breakpoint family.
GrowthCertificate growth_constant(const AtomicMeasure& mu, double m,
                                  double r_min,
                                  const std::vector<Point>& extra_centers = {});

// mu(alpha Q) <= beta mu(Q)
bool is_doubling(const AtomicMeasure& mu, const Cube& q, double alpha,
                 double beta);

// t-small boundary: mu({x in 2Q : dist(x,dQ) <= lambda l(Q)}) <= t lambda mu(2Q)
// for every lambda > 0, checked at the atom-induced breakpoints.
bool has_small_boundary(const AtomicMeasure& mu, const Cube& q, double t);

// Smallest t for which q has t-small boundary (0 when 2Q carries no mass,
// +inf when an atom sits exactly on the boundary).
double small_boundary_constant(const AtomicMeasure& mu, const Cube& q);

struct SmallBoundaryScan {
  std::optional<Cube> cube;
  std::vector<double> rejected_halfsides;  // scan trace when the search fails
};

// Cube R centred at x with t-small boundary and B(x,eps) in R in B(x, C_n eps),
// found by a pigeonhole scan over a geometric family of halfsides.
SmallBoundaryScan find_small_boundary_cube(const AtomicMeasure& mu,
                                           const Point& x, double eps, double t,
                                           double c_n, int scan_points = 64);

// Least k >= 0 with mu(6^{k+1} Q) <= 6^{m+1} mu(6^k Q); returns 6^k Q.
Cube smallest_big_doubling_ancestor(const AtomicMeasure& mu, const Cube& q,
                                    double m, int* k_out = nullptr);

// ---- generators ----------------------------------------------------------

// Planar four-corner Cantor set, the standard order-1 non-doubling example:
// 4^level atoms of weight 4^{-level}, resolution 4^{-level}.
AtomicMeasure generate_cantor_4corner(int level);

// 1/4-Cantor set on the line (order 1/2): 2^level atoms, resolution 4^{-level}.
AtomicMeasure generate_cantor_1d(int level);

// count^dim lattice of equal atoms on the unit cube; count = 1 gives a single
// centred atom.
AtomicMeasure generate_uniform_cube(int dim, int count);

// count uniform atoms on the unit cube, equal weights, seeded.
AtomicMeasure generate_random(int dim, int count, uint64_t seed);

AtomicMeasure generate(const std::string& kind, int dim, int level_or_count,
                       uint64_t seed);

}  // namespace bcz
