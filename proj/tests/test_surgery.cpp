#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "bcz/rng.hpp"
#include "bcz/surgery.hpp"

using namespace bcz;

TEST_CASE("surgery level offset brackets theta") {
  for (double theta : {0.5, 0.25, 0.3, 0.7, 0.011, 1.0 / 3.0}) {
    const int j = surgery_level_offset(theta);
    const double pj = std::ldexp(1.0, j);
    CHECK(pj >= std::ldexp(theta, -21));
    CHECK(pj < std::ldexp(theta, -20));
  }
}

namespace {

void check_partition_exact(const SurgeryPartition& part,
                           const AtomicMeasure& mu, const Cube& host) {
  std::set<int> seen;
  size_t total = 0;
  for (int a : part.sep_atoms) {
    CHECK(seen.insert(a).second);
    ++total;
  }
  for (int a : part.boundary_atoms) {
    CHECK(seen.insert(a).second);
    ++total;
  }
  for (const auto& piece : part.delta_pieces)
    for (int a : piece.atoms) {
      CHECK(seen.insert(a).second);
      ++total;
    }
  CHECK(static_cast<int>(total) == part.host_atom_count);
  for (size_t i = 0; i < mu.size(); ++i)
    CHECK(host.contains(mu.atom(i).p) == (seen.count(static_cast<int>(i)) > 0));
}

}  // namespace

TEST_CASE("triple surgery partitions exactly") {
  const AtomicMeasure mu = generate_random(2, 300, 5);
  const double theta = 0.25;
  const int k_level = 2;  // l(K) = 1/4
  const int q_level = k_level - surgery_level_offset(theta);
  const DyadicGrid fourth = DyadicGrid::from_seed(77, 2, -2, q_level + 2);

  SUBCASE("identical cubes: thin frame, delta tiles the interior") {
    const Cube c(Point{0.5, 0.5}, 0.125, false);
    const SurgeryPartition part =
        surgery_triple(mu, c, c, c, theta, fourth, k_level);
    check_partition_exact(part, mu, c);
    CHECK(part.sep_atoms.empty());  // I = J = K leaves nothing separated
    CHECK(!part.delta_pieces.empty());
    for (const auto& piece : part.delta_pieces) {
      CHECK(piece.five_l_inside);  // deep pieces sit far inside by scale
      for (int a : piece.atoms) CHECK(piece.inner.contains(mu.atom(a).p));
    }
  }

  SUBCASE("far partner cubes: everything separated") {
    const Cube i_cube(Point{0.2, 0.2}, 0.1, false);
    const Cube j_cube(Point{3.0, 3.0}, 0.25, false);
    const Cube k_cube(Point{3.0, 3.0}, 0.125, false);
    const SurgeryPartition part =
        surgery_triple(mu, i_cube, j_cube, k_cube, theta, fourth, k_level);
    check_partition_exact(part, mu, i_cube);
    CHECK(part.delta_pieces.empty());
    CHECK(part.boundary_atoms.empty());
    CHECK(part.sep_atoms.size() ==
          static_cast<size_t>(part.host_atom_count));

    // pair mode sees the same picture
    const PairSurgeryResult pres =
        surgery_pair(mu, i_cube, k_cube, theta, fourth, k_level, 64.0);
    CHECK(pres.partition.delta_pieces.empty());
    CHECK(pres.partition.boundary_atoms.empty());
    CHECK(pres.partition.sep_atoms.size() ==
          static_cast<size_t>(pres.partition.host_atom_count));
  }

  SUBCASE("piece counts bounded over random instances") {
    Rng rng(9);
    size_t worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const double cx = rng.uniform(0.2, 0.8), cy = rng.uniform(0.2, 0.8);
      const Cube i_cube(Point{cx, cy}, 0.125, false);
      const Cube j_cube(Point{cx + rng.uniform(-0.05, 0.05),
                              cy + rng.uniform(-0.05, 0.05)},
                        0.25, false);
      const Cube k_cube(Point{cx + rng.uniform(-0.05, 0.05),
                              cy + rng.uniform(-0.05, 0.05)},
                        0.125, false);
      const SurgeryPartition part =
          surgery_triple(mu, i_cube, j_cube, k_cube, theta, fourth, k_level);
      check_partition_exact(part, mu, i_cube);
      worst = std::max(worst, part.delta_pieces.size());
    }
    // at most (2^{-j(theta)})^n auxiliary cells meet the host
    const double cells_per_axis = std::ldexp(1.0, -surgery_level_offset(theta));
    CHECK(worst <= static_cast<size_t>(cells_per_axis * cells_per_axis));
  }
}

TEST_CASE("boundary part sits inside the host-only bad region") {
  const AtomicMeasure mu = generate_random(2, 400, 21);
  const double theta = 0.25;
  const int k_level = 2;
  const int host_level = 2;
  const int q_level = k_level - surgery_level_offset(theta);
  const DyadicGrid g2 = DyadicGrid::from_seed(31, 2, -4, q_level + 4);
  const DyadicGrid g3 = DyadicGrid::from_seed(32, 2, -4, q_level + 4);
  const DyadicGrid g4 = DyadicGrid::from_seed(33, 2, -4, q_level + 4);

  const Cube i_cube = g2.geometry(g2.cube_containing(Point{0.4, 0.4}, host_level));
  const Cube j_cube = g2.geometry(g2.cube_containing(Point{0.42, 0.42}, host_level));
  const Cube k_cube = g3.geometry(g3.cube_containing(Point{0.41, 0.39}, host_level));
  const SurgeryPartition part =
      surgery_triple(mu, i_cube, j_cube, k_cube, theta, g4, k_level);
  for (int a : part.boundary_atoms) {
    CHECK(in_surgery_bad_region(mu.atom(a).p, host_level, {&g2, &g3}, g4,
                                theta, 2));
  }
}

TEST_CASE("pair surgery with small-boundary representatives") {
  const AtomicMeasure mu = generate_random(2, 300, 13);
  const double theta = 0.25;
  const int k_level = 2;
  const int q_level = k_level - surgery_level_offset(theta);
  const DyadicGrid fourth = DyadicGrid::from_seed(55, 2, -2, q_level + 2);
  const Cube i_cube(Point{0.45, 0.45}, 0.15, false);
  const Cube k_cube(Point{0.5, 0.5}, 0.125, false);

  const PairSurgeryResult res =
      surgery_pair(mu, i_cube, k_cube, theta, fourth, k_level, 256.0);
  check_partition_exact(res.partition, mu, i_cube);
  CHECK(res.failed_small_boundary.empty());
  for (const auto& piece : res.partition.delta_pieces) {
    CHECK(has_small_boundary(mu, piece.inner, 256.0));
    const Cube q = fourth.geometry(piece.q);
    // (1-theta)Q inside S_Q inside (1-theta/2)Q
    CHECK(piece.inner.halfside >= (1.0 - theta) * q.halfside - 1e-15);
    CHECK(piece.inner.halfside <= (1.0 - theta / 2.0) * q.halfside + 1e-15);
    for (int a : piece.atoms) CHECK(piece.inner.contains(mu.atom(a).p));
  }
}
