#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bcz/measure.hpp"

using namespace bcz;

TEST_CASE("total variation") {
  AtomicMeasure empty(1, 1.0, {});
  CHECK(empty.total_variation() == 0.0);

  AtomicMeasure one(1, 1.0, {{Point{0.0}, cplx(3.0, -4.0)}});
  CHECK(one.total_variation() == doctest::Approx(5.0).epsilon(1e-15));

  AtomicMeasure two(1, 1.0, {{Point{0.0}, 1.0}, {Point{1.0}, -1.0}});
  CHECK(two.total_variation() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(two.total()) == doctest::Approx(0.0));
}

TEST_CASE("set mass over regions") {
  AtomicMeasure nu(1, 0.1, {{Point{2.0}, 1.0}});
  CHECK(nu.mass_ball(Point{0.0}, 2.0).real() == 0.0);  // open ball boundary
  CHECK(nu.mass_ball(Point{0.0}, 2.1).real() == 1.0);

  AtomicMeasure pair(1, 0.1, {{Point{0.0}, 1.0}, {Point{1.0}, 1.0}});
  Cube q(Point{0.5}, 1.0, true);  // [-0.5, 1.5]
  CHECK(pair.mass_cube(q).real() == 2.0);

  // additivity over disjoint regions is exact
  Cube left(Point{0.0}, 0.25, true), right(Point{1.0}, 0.25, true);
  CHECK(pair.mass_cube(left).real() + pair.mass_cube(right).real() ==
        pair.mass_cube(q).real());
}

TEST_CASE("growth constant breakpoint sweep") {
  AtomicMeasure mu(1, 0.25, {{Point{0.0}, 1.0}, {Point{1.0}, 1.0}});
  const GrowthCertificate cert = growth_constant(mu, 1.0, 0.5);
  CHECK(cert.constant == doctest::Approx(2.0).epsilon(1e-14));

  AtomicMeasure single(1, 0.5, {{Point{0.0}, 0.7}});
  CHECK(growth_constant(single, 1.0, 1.0).constant ==
        doctest::Approx(0.7).epsilon(1e-15));

  AtomicMeasure empty(1, 1.0, {});
  CHECK(growth_constant(empty, 1.0, 1.0).constant == 0.0);

  // monotone nonincreasing in r_min, linear in a rescale
  const double c1 = growth_constant(mu, 1.0, 0.5).constant;
  const double c2 = growth_constant(mu, 1.0, 0.8).constant;
  CHECK(c2 <= c1 + 1e-15);
  std::vector<Atom> scaled;
  for (const auto& a : mu.atoms()) scaled.push_back({a.p, a.w * 3.0});
  AtomicMeasure mu3(1, 0.25, scaled);
  CHECK(growth_constant(mu3, 1.0, 0.5).constant ==
        doctest::Approx(3.0 * c1).epsilon(1e-14));

  CHECK_THROWS(growth_constant(mu, 1.0, 0.1));  // below resolution
}

TEST_CASE("doubling predicate") {
  Cube q(Point{0.0}, 1.0, true);
  AtomicMeasure center(1, 0.1, {{Point{0.0}, 1.0}});
  CHECK(is_doubling(center, q, 2.0, 1.0));

  AtomicMeasure outside(1, 0.1, {{Point{1.5}, 1.0}});
  CHECK_FALSE(is_doubling(outside, q, 2.0, 1.0));  // mu(Q)=0 < mu(2Q)

  // a uniform cloud entirely inside Q is (2,1)-doubling: 2Q adds nothing
  std::vector<Atom> cloud;
  for (int i = 0; i < 100; ++i)
    cloud.push_back({Point{-0.9 + 1.8 * i / 99.0}, 0.01});
  AtomicMeasure uniform(1, 0.01, cloud);
  CHECK(is_doubling(uniform, q, 2.0, 1.0));
}

TEST_CASE("small boundary predicate") {
  Cube q(Point{0.0}, 0.5, true);  // unit cube
  AtomicMeasure center(1, 0.01, {{Point{0.0}, 1.0}});
  // single breakpoint lambda = 1/2: 1 <= 4 * (1/2) * 1
  CHECK(has_small_boundary(center, q, 4.0));
  CHECK(small_boundary_constant(center, q) == doctest::Approx(2.0));

  AtomicMeasure on_boundary(1, 0.01, {{Point{0.5}, 1.0}});
  CHECK_FALSE(has_small_boundary(on_boundary, q, 1e9));

  AtomicMeasure empty(1, 1.0, {});
  CHECK(has_small_boundary(empty, q, 0.5));

  // monotone in t
  AtomicMeasure mix(1, 0.01, {{Point{0.1}, 1.0}, {Point{0.45}, 0.5}});
  const double t0 = small_boundary_constant(mix, q);
  CHECK(has_small_boundary(mix, q, t0));
  CHECK(has_small_boundary(mix, q, t0 * 2.0));
  CHECK_FALSE(has_small_boundary(mix, q, t0 * 0.5));
}

TEST_CASE("find small boundary cube") {
  const Point x{0.3};
  AtomicMeasure empty(1, 0.001, {});
  auto scan = find_small_boundary_cube(empty, x, 0.01, 4.0, 16.0);
  REQUIRE(scan.cube.has_value());
  CHECK(scan.cube->halfside == doctest::Approx(0.01));  // smallest admissible

  AtomicMeasure self(1, 0.001, {{x, 1.0}});
  scan = find_small_boundary_cube(self, x, 0.01, 4.0, 16.0);
  REQUIRE(scan.cube.has_value());
  CHECK(has_small_boundary(self, *scan.cube, 4.0));
  // sandwich B(x,eps) in R in B(x, c_n eps)
  CHECK(scan.cube->halfside >= 0.01);
  CHECK(scan.cube->halfside * std::sqrt(1.0) < 16.0 * 0.01);

  // adversarial shell: atoms exactly at the first scanned halfside boundary
  std::vector<Atom> shell;
  shell.push_back({x, 1.0});
  shell.push_back({Point{0.3 + 0.01}, 25.0});
  shell.push_back({Point{0.3 - 0.01}, 25.0});
  AtomicMeasure adv(1, 0.001, shell);
  scan = find_small_boundary_cube(adv, x, 0.01, 4.0, 16.0);
  REQUIRE(scan.cube.has_value());
  CHECK(has_small_boundary(adv, *scan.cube, 4.0));
  CHECK(scan.cube->halfside > 0.01);  // the offending halfside was skipped
}

TEST_CASE("smallest big doubling ancestor") {
  Cube q(Point{0.0}, 1.0, true);
  AtomicMeasure inside(1, 0.01, {{Point{0.0}, 1.0}});
  int k = -1;
  smallest_big_doubling_ancestor(inside, q, 1.0, &k);
  CHECK(k == 0);

  // heavy ring in 6Q \ Q forces at least one growth step
  AtomicMeasure ring(
      1, 0.01, {{Point{0.0}, 1e-4}, {Point{4.0}, 1.0}, {Point{-4.0}, 1.0}});
  smallest_big_doubling_ancestor(ring, q, 1.0, &k);
  CHECK(k >= 1);

  AtomicMeasure empty(1, 1.0, {});
  smallest_big_doubling_ancestor(empty, q, 1.0, &k);
  CHECK(k == 0);
}

TEST_CASE("long distance") {
  Cube q(Point{0.0}, 0.5, true), r(Point{0.0}, 0.5, true);
  CHECK(long_distance(q, r) == doctest::Approx(2.0));
  Cube far(Point{4.0}, 0.5, true);
  CHECK(long_distance(q, far) == doctest::Approx(5.0));
  Cube touching(Point{2.0 - 0.5}, 1.0, true);  // side 2, touching side 1 at 0.5
  CHECK(long_distance(q, touching) == doctest::Approx(3.0));
}

TEST_CASE("generators") {
  const AtomicMeasure c1 = generate_cantor_4corner(1);
  CHECK(c1.size() == 4);
  CHECK(c1.resolution() == doctest::Approx(0.25));
  for (const auto& a : c1.atoms()) CHECK(a.w.real() == doctest::Approx(0.25));
  CHECK(c1.total_variation() == doctest::Approx(1.0).epsilon(1e-14));

  const AtomicMeasure u1 = generate_uniform_cube(2, 1);
  CHECK(u1.size() == 1);
  CHECK(u1.atom(0).p.x[0] == doctest::Approx(0.5));

  const AtomicMeasure r1 = generate_random(2, 50, 42);
  const AtomicMeasure r2 = generate_random(2, 50, 42);
  REQUIRE(r1.size() == r2.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(same_point(r1.atom(i).p, r2.atom(i).p));
    CHECK(r1.atom(i).w == r2.atom(i).w);
  }

  // discretization stability: growth constant within a fixed band over levels
  double lo = 1e300, hi = 0.0;
  for (int level : {2, 3, 4}) {
    const AtomicMeasure c = generate_cantor_4corner(level);
    const double g = growth_constant(c, 1.0, c.resolution()).constant;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  CHECK(hi <= 4.0 * lo);
}

TEST_CASE("measure json roundtrip") {
  const AtomicMeasure mu = generate_cantor_4corner(2);
  const AtomicMeasure back = AtomicMeasure::from_json(mu.to_json());
  REQUIRE(back.size() == mu.size());
  CHECK(back.resolution() == mu.resolution());
  for (size_t i = 0; i < mu.size(); ++i) {
    CHECK(same_point(back.atom(i).p, mu.atom(i).p));
    CHECK(back.atom(i).w == mu.atom(i).w);
  }
}
