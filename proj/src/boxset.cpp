#include "bcz/boxset.hpp"

#include <algorithm>

#include "bcz/common.hpp"

namespace bcz {

namespace {

struct Interval {
  double lo, hi;
  bool positive() const { return hi > lo; }
};

struct RawBox {
  std::array<Interval, kMaxDim> iv;
  int dim;
  bool positive() const {
    for (int i = 0; i < dim; ++i)
      if (!iv[i].positive()) return false;
    return true;
  }
};

RawBox to_raw(const Cube& c) {
  RawBox b;
  b.dim = c.dim();
  for (int i = 0; i < c.dim(); ++i) b.iv[i] = {c.lo(i), c.hi(i)};
  return b;
}

bool overlap(const RawBox& a, const RawBox& b) {
  for (int i = 0; i < a.dim; ++i)
    if (a.iv[i].hi <= b.iv[i].lo || b.iv[i].hi <= a.iv[i].lo) return false;
  return true;
}

// a \ b as up to 2n disjoint positive-volume boxes
void subtract(const RawBox& a, const RawBox& b, std::vector<RawBox>& out) {
  if (!overlap(a, b)) {
    out.push_back(a);
    return;
  }
  RawBox core = a;  // shrink axis by axis, emitting the slabs outside b
  for (int i = 0; i < a.dim; ++i) {
    if (core.iv[i].lo < b.iv[i].lo) {
      RawBox slab = core;
      slab.iv[i] = {core.iv[i].lo, b.iv[i].lo};
      if (slab.positive()) out.push_back(slab);
      core.iv[i].lo = b.iv[i].lo;
    }
    if (core.iv[i].hi > b.iv[i].hi) {
      RawBox slab = core;
      slab.iv[i] = {b.iv[i].hi, core.iv[i].hi};
      if (slab.positive()) out.push_back(slab);
      core.iv[i].hi = b.iv[i].hi;
    }
  }
  // the remaining core lies inside b and is dropped
}

}  // namespace

bool BoxUnion::contains_point(const Point& p) const {
  for (const auto& b : boxes_) {
    bool in = true;
    for (int i = 0; i < b.dim(); ++i)
      if (p.x[i] < b.lo(i) || p.x[i] > b.hi(i)) in = false;
    if (in) return true;
  }
  return false;
}

bool BoxUnion::covers_box(const Cube& a) const {
  std::vector<RawBox> rest{to_raw(a)};
  if (!rest.front().positive()) return true;
  for (const auto& b : boxes_) {
    const RawBox rb = to_raw(b);
    std::vector<RawBox> next;
    for (const auto& piece : rest) subtract(piece, rb, next);
    rest = std::move(next);
    if (rest.empty()) return true;
    if (rest.size() > 100000) fail("BoxUnion: fragmentation budget exceeded");
  }
  return rest.empty();
}

bool BoxUnion::intersects_box(const Cube& a) const {
  const RawBox ra = to_raw(a);
  if (!ra.positive()) return contains_point(a.center);
  for (const auto& b : boxes_)
    if (overlap(ra, to_raw(b))) return true;
  return false;
}

Cube BoxUnion::bounding_box() const {
  if (boxes_.empty()) fail("BoxUnion: bounding box of empty union");
  const int dim = boxes_.front().dim();
  Point lo = Point::zero(dim), hi = Point::zero(dim);
  for (int i = 0; i < dim; ++i) {
    lo.x[i] = std::numeric_limits<double>::infinity();
    hi.x[i] = -std::numeric_limits<double>::infinity();
  }
  for (const auto& b : boxes_)
    for (int i = 0; i < dim; ++i) {
      lo.x[i] = std::min(lo.x[i], b.lo(i));
      hi.x[i] = std::max(hi.x[i], b.hi(i));
    }
  Point c = Point::zero(dim);
  double h = 0.0;
  for (int i = 0; i < dim; ++i) {
    c.x[i] = 0.5 * (lo.x[i] + hi.x[i]);
    h = std::max(h, 0.5 * (hi.x[i] - lo.x[i]));
  }
  return Cube(c, h, true);
}

}  // namespace bcz
