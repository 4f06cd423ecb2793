#pragma once

#include <vector>

#include "bcz/geometry.hpp"

namespace bcz {

// Finite union of axis-aligned boxes with exact rectilinear set algebra.
// Containment queries are up to Lebesgue-null overlap of box faces, which is
// all the measure-theoretic checks consume.
class BoxUnion {
 public:
  BoxUnion() = default;
  explicit BoxUnion(std::vector<Cube> boxes) : boxes_(std::move(boxes)) {}

  void add(const Cube& c) { boxes_.push_back(c); }
  const std::vector<Cube>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  bool contains_point(const Point& p) const;
  // closed box a covered by the union (up to faces)?
  bool covers_box(const Cube& a) const;
  // does a meet the complement on a set of positive volume?
  bool meets_complement(const Cube& a) const { return !covers_box(a); }
  bool intersects_box(const Cube& a) const;

  Cube bounding_box() const;

 private:
  std::vector<Cube> boxes_;
};

}  // namespace bcz
