#include "bcz/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bcz/common.hpp"

namespace bcz {

DyadicGrid DyadicGrid::from_seed(uint64_t seed, int dim, int k_min, int k_max) {
  if (k_max < k_min) fail("DyadicGrid: empty window");
  if (dim < 1 || dim > kMaxDim) fail("DyadicGrid: bad dimension");
  DyadicGrid g;
  g.dim_ = dim;
  g.k_min_ = k_min;
  g.k_max_ = k_max;
  g.seed_ = seed;
  Rng rng(seed);
  const int nbits = (k_max + kExtraBits) - k_min;  // levels k_min+1 .. k_max+16
  g.bits_.resize(nbits);
  for (int i = 0; i < nbits; ++i)
    g.bits_[i] = static_cast<unsigned>(rng.next_u64() & ((1u << dim) - 1u));
  // x_k = sum_{j > k} w_j 2^{-j}, accumulated from the finest bit upward.
  g.shift_.resize(k_max - k_min + 1);
  std::array<double, kMaxDim> acc{0.0, 0.0, 0.0};
  for (int i = nbits - 1; i >= 0; --i) {
    // bits_[i] is w_j for j = k_min + 1 + i; after absorbing w_j the
    // accumulator equals x_{j-1}.
    const int j = k_min + 1 + i;
    const double p2 = std::ldexp(1.0, -j);
    for (int a = 0; a < dim; ++a)
      if (g.bits_[i] & (1u << a)) acc[a] += p2;
    if (j - 1 >= k_min && j - 1 <= k_max) g.shift_[j - 1 - k_min] = acc;
  }
  return g;
}

DyadicGrid DyadicGrid::standard(int dim, int k_min, int k_max) {
  DyadicGrid g = from_seed(0, dim, k_min, k_max);
  std::fill(g.bits_.begin(), g.bits_.end(), 0u);
  for (auto& s : g.shift_) s = {0.0, 0.0, 0.0};
  return g;
}

std::string DyadicGrid::seed_hex() const {
  std::ostringstream os;
  os << std::hex << seed_;
  return os.str();
}

void DyadicGrid::check_level(int level) const {
  if (level < k_min_ || level > k_max_) fail("DyadicGrid: level outside window");
}

unsigned DyadicGrid::bits(int level) const {
  // w_level, defined for k_min+1 <= level <= k_max+16
  const int idx = level - (k_min_ + 1);
  if (idx < 0 || idx >= static_cast<int>(bits_.size()))
    fail("DyadicGrid: shift bit outside window");
  return bits_[idx];
}

double DyadicGrid::shift(int level, int axis) const {
  check_level(level);
  return shift_[level - k_min_][axis];
}

CubeRef DyadicGrid::cube_containing(const Point& p, int level) const {
  check_level(level);
  CubeRef r;
  r.level = level;
  const double s = side(level);
  for (int i = 0; i < dim_; ++i)
    r.coord[i] =
        static_cast<int64_t>(std::floor((p.x[i] - shift(level, i)) / s));
  return r;
}

Cube DyadicGrid::geometry(const CubeRef& r) const {
  check_level(r.level);
  const double s = side(r.level);
  Point c = Point::zero(dim_);
  for (int i = 0; i < dim_; ++i)
    c.x[i] = shift(r.level, i) + (static_cast<double>(r.coord[i]) + 0.5) * s;
  return Cube(c, s / 2.0, false);
}

CubeRef DyadicGrid::parent(const CubeRef& r) const {
  check_level(r.level - 1);
  const unsigned w = bits(r.level);
  CubeRef out;
  out.level = r.level - 1;
  for (int i = 0; i < dim_; ++i) {
    const int64_t c = r.coord[i] - ((w >> i) & 1u);
    out.coord[i] = c >= 0 ? c / 2 : (c - 1) / 2;  // floor division
  }
  return out;
}

CubeRef DyadicGrid::ancestor(const CubeRef& r, int levels_up) const {
  CubeRef cur = r;
  for (int i = 0; i < levels_up; ++i) cur = parent(cur);
  return cur;
}

std::vector<CubeRef> DyadicGrid::children(const CubeRef& r) const {
  check_level(r.level + 1);
  const unsigned w = bits(r.level + 1);
  std::vector<CubeRef> out;
  out.reserve(1u << dim_);
  for (unsigned b = 0; b < (1u << dim_); ++b) {
    CubeRef c;
    c.level = r.level + 1;
    for (int i = 0; i < dim_; ++i)
      c.coord[i] = 2 * r.coord[i] + ((w >> i) & 1u) + ((b >> i) & 1u);
    out.push_back(c);
  }
  return out;
}

double DyadicGrid::skeleton_distance(const Cube& q, int level) const {
  check_level(level);
  const double s = side(level);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim_; ++i) {
    const double u = (q.lo(i) - shift(level, i)) / s;
    const double v = (q.hi(i) - shift(level, i)) / s;
    double axis;
    if (std::ceil(u) <= std::floor(v)) {
      axis = 0.0;  // a grid hyperplane crosses the box on this axis
    } else {
      axis = s * std::min(u - std::floor(u), std::ceil(v) - v);
    }
    best = std::min(best, axis);
  }
  return best;
}

double DyadicGrid::skeleton_distance(const Point& p, int level) const {
  return skeleton_distance(Cube(p, 0.0, true), level);
}

Goodness is_good(const Cube& q_geom, int q_level, const DyadicGrid& other,
                 const GoodnessParams& p) {
  const double lq = q_geom.side();
  const int coarsest_needed = q_level - p.sigma;  // l(R) = 2^sigma l(Q)
  if (coarsest_needed < other.k_min()) return Goodness::Indeterminate;
  for (int l = other.k_min(); l <= coarsest_needed; ++l) {
    const double lr = other.side(l);
    const double threshold = std::pow(lq, p.gamma) * std::pow(lr, 1.0 - p.gamma);
    if (other.skeleton_distance(q_geom, l) <= threshold) return Goodness::Bad;
  }
  return Goodness::Good;
}

BadProbability bad_probability_mc(int dim, int level_gap,
                                  const GoodnessParams& p, int trials,
                                  uint64_t seed) {
  if (trials < 100) fail("bad_probability_mc: need at least 100 trials");
  // Fix the unit cube of the standard grid at level 0 and shift the other
  // grid randomly; examine coarser levels down to -(sigma + level_gap).
  const int q_level = 0;
  const int k_min = q_level - p.sigma - level_gap;
  Cube q(Point::zero(dim), 0.5);
  for (int i = 0; i < dim; ++i) q.center.x[i] = 0.5;
  Rng rng(seed);
  int bad = 0;
  for (int t = 0; t < trials; ++t) {
    const DyadicGrid g =
        DyadicGrid::from_seed(rng.next_u64(), dim, k_min, q_level);
    if (is_good(q, q_level, g, p) == Goodness::Bad) ++bad;
  }
  BadProbability out;
  out.trials = trials;
  out.estimate = static_cast<double>(bad) / trials;
  const double half =
      1.96 * std::sqrt(out.estimate * (1.0 - out.estimate) / trials);
  out.ci_low = std::max(0.0, out.estimate - half);
  out.ci_high = std::min(1.0, out.estimate + half);
  return out;
}

}  // namespace bcz
