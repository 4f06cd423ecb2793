#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bcz/geometry.hpp"
#include "bcz/rng.hpp"

namespace bcz {

// Cube handle inside one grid: level k means side 2^{-k}; integer lattice
// coordinates make parent/child arithmetic exact.
struct CubeRef {
  int level = 0;
  std::array<int64_t, kMaxDim> coord{0, 0, 0};

  bool operator==(const CubeRef& o) const {
    return level == o.level && coord == o.coord;
  }
};

struct CubeRefHash {
  size_t operator()(const CubeRef& r) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(r.level);
    for (int i = 0; i < kMaxDim; ++i) {
      h ^= static_cast<uint64_t>(r.coord[i]) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

// Randomly shifted dyadic lattice over a finite scale window.  The shift at
// level k is x_k = sum_{j>k} w_j 2^{-j} over the stored bits (j <= k_max + 16,
// so the truncation error sits 16 binary scales below the finest stored side).
class DyadicGrid {
 public:
  static constexpr int kExtraBits = 16;

  DyadicGrid() = default;
  static DyadicGrid from_seed(uint64_t seed, int dim, int k_min, int k_max);
  static DyadicGrid standard(int dim, int k_min, int k_max);

  int dim() const { return dim_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  uint64_t seed() const { return seed_; }
  std::string seed_hex() const;

  double side(int level) const { return std::ldexp(1.0, -level); }
  double shift(int level, int axis) const;

  CubeRef cube_containing(const Point& p, int level) const;
  Cube geometry(const CubeRef& r) const;
  CubeRef parent(const CubeRef& r) const;
  CubeRef ancestor(const CubeRef& r, int levels_up) const;
  std::vector<CubeRef> children(const CubeRef& r) const;

  // Euclidean distance from the box q to the union of all level-l cube
  // boundaries of this grid (the level-l skeleton).
  double skeleton_distance(const Cube& q, int level) const;
  double skeleton_distance(const Point& p, int level) const;

 private:
  void check_level(int level) const;
  unsigned bits(int level) const;  // shift bit vector w_level

  int dim_ = 1;
  int k_min_ = 0;
  int k_max_ = 0;
  uint64_t seed_ = 0;
  std::vector<unsigned> bits_;                 // levels k_min+1 .. k_max+16
  std::vector<std::array<double, kMaxDim>> shift_;  // per level k_min..k_max
};

enum class Goodness { Good, Bad, Indeterminate };

struct GoodnessParams {
  double gamma = 0.5;
  int sigma = 4;
};

// Q is good w.r.t. the other grid when dist(Q, boundary of R) exceeds
// l(Q)^gamma l(R)^{1-gamma} for every R with l(R) >= 2^sigma l(Q).  Decided
// over the other grid's stored window; Indeterminate when no relevant level
// fits in the window.
Goodness is_good(const Cube& q_geom, int q_level, const DyadicGrid& other,
                 const GoodnessParams& p);

struct BadProbability {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int trials = 0;
};

// Monte Carlo fraction of random shifts making a fixed cube bad; level_gap
// controls how many coarser levels beyond 2^sigma l(Q) are examined.
BadProbability bad_probability_mc(int dim, int level_gap,
                                  const GoodnessParams& p, int trials,
                                  uint64_t seed);

}  // namespace bcz
