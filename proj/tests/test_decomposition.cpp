#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bcz/decomposition.hpp"
#include "bcz/rng.hpp"

using namespace bcz;

TEST_CASE("cz decomposition: nu = mu gives an empty family") {
  const AtomicMeasure mu = generate_cantor_4corner(2);
  const double lambda = std::pow(2.0, mu.dim() + 1) + 1.0;  // above threshold
  const CZDecomposition d = cz_decompose(mu, mu, lambda, 1.0);
  CHECK(d.cubes.empty());
  for (const auto& f : d.good_f) {
    CHECK(std::abs(f - cplx(1.0, 0.0)) < 1e-12);  // density one everywhere
  }
  const CZVerification v = cz_verify(d, mu, mu, 1.0);
  CHECK(v.cd3);
}

TEST_CASE("cz decomposition: singular spike inside a diffuse measure") {
  const AtomicMeasure mu = generate_uniform_cube(2, 6);  // 36 atoms
  // nu: a heavy spike off the mu lattice plus a gentle multiple of mu
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.p, 0.3 * a.w});
  atoms.push_back({Point{0.512, 0.487}, cplx(0.4, 0.3)});
  const AtomicMeasure nu(2, mu.resolution(), atoms);

  const double lambda =
      std::pow(2.0, mu.dim() + 1) * nu.total_variation() / mu.total_variation() *
      4.0;
  const CZDecomposition d = cz_decompose(nu, mu, lambda, 1.0);
  CHECK(!d.cubes.empty());  // the spike must be covered
  bool spike_covered = false;
  for (const auto& q : d.cubes)
    if (q.contains(Point{0.512, 0.487})) spike_covered = true;
  CHECK(spike_covered);

  const CZVerification v = cz_verify(d, nu, mu, 1.0);
  CHECK(v.cd1);
  CHECK(v.cd2);
  CHECK(v.cd3);
  CHECK(v.cd5);
  CHECK(v.cd7);
  CHECK(v.beta_zero_mass);
  CHECK(v.worst_cd5_error < 1e-12);
  CHECK(v.worst_beta_mass < 1e-12);
  CHECK(v.max_overlap <= 1 << (2 * mu.dim() + 2));
  CHECK(v.measured_B < 1e4);
  CHECK(std::isfinite(v.doubling_tail_constant));
}

TEST_CASE("cz decomposition rejects lambda at the threshold") {
  const AtomicMeasure mu = generate_cantor_4corner(1);
  const double threshold = std::pow(2.0, mu.dim() + 1);
  CHECK_THROWS(cz_decompose(mu, mu, threshold, 1.0));
}

TEST_CASE("cz verifier flags a mutated decomposition") {
  const AtomicMeasure mu = generate_uniform_cube(2, 5);
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.p, 0.2 * a.w});
  atoms.push_back({Point{0.513, 0.491}, 9.0});  // off the mu lattice
  const AtomicMeasure nu(2, mu.resolution(), atoms);
  const double lambda =
      std::pow(2.0, 3) * nu.total_variation() / mu.total_variation() * 1.2;
  CZDecomposition d = cz_decompose(nu, mu, lambda, 1.0);
  REQUIRE(!d.cubes.empty());
  const CZVerification good = cz_verify(d, nu, mu, 1.0);
  CHECK(good.cd1);
  d.cubes.front() = d.cubes.front().scaled(0.02);  // shrink a cube
  const CZVerification bad = cz_verify(d, nu, mu, 1.0);
  const bool still_fine = bad.cd1 && bad.cd2 && bad.cd3;
  CHECK_FALSE(still_fine);
}

TEST_CASE("cz decomposition fuzz over random instances") {
  Rng rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    const AtomicMeasure mu = generate_random(2, 20, rng.next_u64());
    std::vector<Atom> atoms;
    Rng sub = rng.split();
    for (const auto& a : mu.atoms())
      atoms.push_back(
          {a.p, a.w * cplx(sub.uniform(-1, 1), sub.uniform(-1, 1))});
    // a couple of off-support spikes
    for (int s = 0; s < 2; ++s)
      atoms.push_back({Point{sub.next_double(), sub.next_double()},
                       cplx(sub.uniform(0.5, 2.0), sub.uniform(-1, 1))});
    const AtomicMeasure nu(2, mu.resolution(), atoms);
    const double lambda = std::pow(2.0, 3) * nu.total_variation() /
                          mu.total_variation() * sub.uniform(1.2, 3.0);
    const CZDecomposition d = cz_decompose(nu, mu, lambda, 1.0);
    const CZVerification v = cz_verify(d, nu, mu, 1.0);
    CHECK(v.cd1);
    CHECK(v.cd2);
    CHECK(v.cd3);
    CHECK(v.cd5);
    CHECK(v.cd7);
    CHECK(v.beta_zero_mass);
    CHECK(v.max_overlap <= 64);
  }
}

TEST_CASE("whitney fuzz over random regions") {
  Rng rng(314);
  for (int trial = 0; trial < 6; ++trial) {
    const AtomicMeasure mu = generate_random(2, 30, rng.next_u64());
    Rng sub = rng.split();
    BoxUnion omega;
    const int boxes = 1 + static_cast<int>(sub.next_below(3));
    for (int b = 0; b < boxes; ++b)
      omega.add(Cube(Point{sub.uniform(0.2, 0.8), sub.uniform(0.2, 0.8)},
                     sub.uniform(0.1, 0.35), true));
    const WhitneyCover cover = whitney(omega, mu, 64.0);
    const WhitneyVerification v = whitney_verify(cover, omega, mu, 64.0);
    CHECK(v.ten_q_inside);
    CHECK(v.r_q_meets_complement);
    CHECK(v.comparable_neighbors);
    CHECK(v.atoms_covered);
    CHECK(v.refined_disjoint);
    CHECK(v.refined_mass);
  }
}

TEST_CASE("whitney cover of an open box") {
  const AtomicMeasure mu = generate_uniform_cube(2, 8);
  BoxUnion omega;
  omega.add(Cube(Point{0.5, 0.5}, 0.5, true));  // the unit cube
  const WhitneyCover cover = whitney(omega, mu, 64.0);
  CHECK(!cover.cubes.empty());
  const WhitneyVerification v = whitney_verify(cover, omega, mu, 64.0);
  CHECK(v.ten_q_inside);
  CHECK(v.r_q_meets_complement);
  CHECK(v.comparable_neighbors);
  CHECK(v.atoms_covered);
  CHECK(v.refined_disjoint);
  CHECK(v.refined_doubling_small_boundary);
  CHECK(v.refined_mass);
  CHECK(v.mass_fraction >= 1.0 / (8.0 * cover.d0));
}

TEST_CASE("whitney cover of a two-box region with empty mass part") {
  const AtomicMeasure mu = generate_uniform_cube(2, 6);
  BoxUnion omega;
  omega.add(Cube(Point{0.3, 0.3}, 0.28, true));
  omega.add(Cube(Point{4.0, 4.0}, 0.2, true));  // no atoms live here
  const WhitneyCover cover = whitney(omega, mu, 64.0);
  const WhitneyVerification v = whitney_verify(cover, omega, mu, 64.0);
  CHECK(v.ten_q_inside);
  CHECK(v.r_q_meets_complement);
  CHECK(v.atoms_covered);
  CHECK(v.refined_disjoint);
  CHECK(v.refined_mass);
}

TEST_CASE("whitney pieces stay inside and mass concentrates") {
  // Omega with zero mass: the refined family may be empty and (c) is vacuous
  const AtomicMeasure mu = generate_uniform_cube(2, 4);
  BoxUnion omega;
  omega.add(Cube(Point{9.0, 9.0}, 0.5, true));
  const WhitneyCover cover = whitney(omega, mu, 64.0);
  const WhitneyVerification v = whitney_verify(cover, omega, mu, 64.0);
  CHECK(v.refined_mass);  // 0 >= 0
  CHECK(v.atoms_covered);
}
