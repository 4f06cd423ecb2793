#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bcz/kernel.hpp"
#include "bcz/measure.hpp"
#include "bcz/operators.hpp"
#include "bcz/rng.hpp"

using namespace bcz;

TEST_CASE("suppression factor") {
  // m = 1 gives beta = 1
  CHECK(suppression_beta(1.0) == 1.0);
  CHECK(suppression_beta(3.0) == 2.0);

  LipschitzProfile zero = LipschitzProfile::zero();
  CHECK(eval_A_phi(zero, 1.0, Point{0.0}, Point{1.0}, Point{2.0}) == 1.0);

  LipschitzProfile one = LipschitzProfile::constant(1.0);
  // d = 2: A = 8/9
  CHECK(eval_A_phi(one, 1.0, Point{0.0}, Point{1.0}, Point{-1.0}) ==
        doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  // d = 1: A = 1/2
  CHECK(eval_A_phi(one, 1.0, Point{0.0}, Point{0.5}, Point{-0.5}) ==
        doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS(eval_A_phi(one, 1.0, Point{0.0}, Point{0.0}, Point{0.0}));
}

TEST_CASE("suppressed kernel values") {
  const BilinearKernel k = scalar_model_kernel(1.0);
  LipschitzProfile one = LipschitzProfile::constant(1.0);
  const BilinearKernel ks = suppressed_kernel(k, one);
  // K = 1/4 at d=2, A = 8/9
  CHECK(ks(Point{0.0}, Point{1.0}, Point{-1.0}).real() ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-15));

  // profile vanishing at x leaves the kernel untouched
  LipschitzProfile cone;
  cone.add_cone(Point{5.0}, 1.0);
  const BilinearKernel kc = suppressed_kernel(k, cone);
  CHECK(kc(Point{0.0}, Point{1.0}, Point{2.0}) ==
        k(Point{0.0}, Point{1.0}, Point{2.0}));

  // A in (0,1] on random samples
  Rng rng(7);
  LipschitzProfile mix = LipschitzProfile::constant(0.3);
  mix.add_cone(Point{0.5}, 2.0);
  for (int i = 0; i < 500; ++i) {
    const Point x{rng.uniform(-2, 2)};
    const Point y{rng.uniform(-2, 2)};
    const Point z{rng.uniform(-2, 2)};
    if (dist(x, y) + dist(x, z) == 0.0) continue;
    const double a = eval_A_phi(mix, 1.0, x, y, z);
    CHECK(a > 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("profile evaluation and audit") {
  LipschitzProfile p;
  p.add_cone(Point{0.0}, 1.0);
  CHECK(p(Point{0.25}) == doctest::Approx(0.75));
  CHECK(p(Point{2.0}) == 0.0);

  LipschitzProfile floor = LipschitzProfile::constant(0.125);
  CHECK(floor(Point{123.0}) == 0.125);

  LipschitzProfile bd;
  bd.set_boundary_term(Cube(Point{0.0}, 0.5, true), 0.1);
  CHECK(bd(Point{0.0}) == 0.0);        // centre is 0.5 from the boundary
  CHECK(bd(Point{0.45}) == doctest::Approx(0.05));

  Rng rng(3);
  std::vector<std::pair<Point, Point>> pairs;
  LipschitzProfile combo = LipschitzProfile::max(p, bd);
  combo.set_floor(0.05);
  for (int i = 0; i < 2000; ++i)
    pairs.push_back({Point{rng.uniform(-2, 2)}, Point{rng.uniform(-2, 2)}});
  CHECK(lipschitz_audit(combo, pairs) <= 1.0 + 1e-9);
}

TEST_CASE("profile json roundtrip") {
  LipschitzProfile p = LipschitzProfile::constant(0.25);
  p.add_cone(Point{0.5, -0.5}, 1.5);
  p.set_boundary_term(Cube(Point{0.0, 0.0}, 1.0, true), 0.2);
  const LipschitzProfile back = LipschitzProfile::from_json(p.to_json());
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Point x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    CHECK(back(x) == p(x));
  }
}

TEST_CASE("kernel condition sampling") {
  KernelSamplerConfig sc;
  sc.dim = 1;
  sc.scale_min = 1e-3;
  sc.scale_max = 1.0;
  sc.seed = 5;
  const BilinearKernel k = scalar_model_kernel(1.0);
  const KernelConditionReport rep = verify_kernel_conditions(k, sc);
  CHECK(rep.size_ratio == doctest::Approx(1.0).epsilon(1e-12));  // equality case
  CHECK(rep.x_hoelder_ratio <= 64.0);  // analytically <= 4m 2^{2m+1} = 32
  CHECK(rep.threshold_samples > 0);

  // homogeneity: doubling the kernel doubles every ratio
  const KernelConditionReport rep2 =
      verify_kernel_conditions(scale_kernel(k, 2.0), sc);
  CHECK(rep2.size_ratio == doctest::Approx(2.0 * rep.size_ratio));
  CHECK(rep2.x_hoelder_ratio ==
        doctest::Approx(2.0 * rep.x_hoelder_ratio).epsilon(1e-12));
}

TEST_CASE("improved size stays bounded across profiles") {
  const BilinearKernel k = scalar_model_kernel(1.0);
  Rng rng(17);
  KernelSamplerConfig sc;
  sc.dim = 1;
  sc.scale_min = 1e-3;
  sc.scale_max = 2.0;
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 10; ++i) {
    LipschitzProfile phi;
    phi.add_cone(Point{rng.uniform(-1, 1)}, rng.uniform(0.2, 2.0));
    if (rng.next_bool()) phi.set_floor(rng.uniform(0.0, 0.4));
    sc.seed = 100 + i;
    const KernelConditionReport rep =
        verify_kernel_conditions(suppressed_kernel(k, phi), sc, &phi);
    lo = std::min(lo, rep.improved_size_ratio);
    hi = std::max(hi, rep.improved_size_ratio);
    CHECK(rep.improved_size_ratio < 1e4);
    CHECK(key_comparison_constant(phi, 1.0, sc) > 0.01);
  }
  CHECK(hi <= 8.0 * lo);  // stable across profiles
}

TEST_CASE("adjoint kernels and the trilinear identity") {
  const BilinearKernel k = antisymmetric_kernel(1.0);
  // a kernel symmetric under swapping x and y is fixed by the first adjoint
  const BilinearKernel sym(
      KernelParams{1.0, 1.0, 1.0},
      [](const Point& x, const Point& y, const Point& z) -> cplx {
        const double d = dist(x, y) + dist(x, z) + dist(y, z);
        return cplx(1.0 / (d * d), 0.0);
      },
      "perimeter");
  const BilinearKernel sym1 = adjoint_kernel(sym, 1);
  CHECK(sym1(Point{0.0}, Point{1.0}, Point{2.0}) ==
        sym(Point{0.0}, Point{1.0}, Point{2.0}));

  // involution
  const BilinearKernel twice = adjoint_kernel(adjoint_kernel(k, 1), 1);
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const Point x{rng.uniform(-1, 1)}, y{rng.uniform(-1, 1)},
        z{rng.uniform(-1, 1)};
    if (dist(x, y) + dist(x, z) == 0.0) continue;
    CHECK(twice(x, y, z) == k(x, y, z));
  }

  // trilinear identity on random atomic data, untruncated
  const AtomicMeasure mu = generate_random(1, 3, 99);
  std::vector<cplx> f(3), g(3), h(3);
  for (int i = 0; i < 3; ++i) {
    f[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    g[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    h[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  const TruncationSpec spec{TruncMode::Max, 0.0, 0.0};
  const cplx lhs = trilinear_form(k, mu, f, g, h, spec);
  const cplx via1 = trilinear_form(adjoint_kernel(k, 1), mu, h, g, f, spec);
  const cplx via2 = trilinear_form(adjoint_kernel(k, 2), mu, f, h, g, spec);
  CHECK(std::abs(lhs - via1) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  CHECK(std::abs(lhs - via2) <= 1e-12 * std::max(1.0, std::abs(lhs)));
}
