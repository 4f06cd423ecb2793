#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bcz/maximal.hpp"
#include "bcz/rng.hpp"
#include "bcz/suppression.hpp"

using namespace bcz;

namespace {

SuppressionInstance basic_instance(const AtomicMeasure& mu, double lambda0) {
  SuppressionInstance inst;
  inst.mu = mu;
  const BilinearKernel k = scalar_model_kernel(1.0);
  std::vector<cplx> one(mu.size(), 1.0);
  inst.targets.push_back({k, one, one});
  inst.lambda0 = lambda0;
  inst.weak_exponent_s = 1.0;
  return inst;
}

}  // namespace

TEST_CASE("epsilon radius from the hand instance") {
  // |T_eps| = 34/225 for eps < 2, 1/25 on [2,3), 0 beyond
  const BilinearKernel k = scalar_model_kernel(1.0);
  AtomicMeasure mu(1, 0.01,
                   {{Point{0.0}, 1.0}, {Point{1.0}, 1.0}, {Point{2.0}, 1.0},
                    {Point{3.0}, 1.0}});
  std::vector<cplx> f = {0.0, 1.0, 0.0, 1.0};  // nu1 = delta_1 + delta_3
  std::vector<cplx> g = {0.0, 0.0, 1.0, 0.0};  // nu2 = delta_2
  const Point x{0.0};
  auto eps = epsilon_radius(k, mu, f, g, x, 0.1);
  REQUIRE(eps.has_value());
  CHECK(*eps == doctest::Approx(2.0));
  CHECK_FALSE(epsilon_radius(k, mu, f, g, x, 0.2).has_value());
  CHECK_FALSE(epsilon_radius(k, mu, f, g, x, 100.0).has_value());
}

TEST_CASE("phi0 envelope basics") {
  const AtomicMeasure mu = generate_cantor_1d(3);
  // enormous lambda0: nothing suppressed, zero set carries all the mass
  SuppressionInstance quiet = basic_instance(mu, 1e9);
  const Phi0Result none = build_phi0(quiet);
  CHECK(none.phi0.is_zero());
  CHECK(none.zero_set_mass_fraction == doctest::Approx(1.0));

  // small lambda0: cones appear, apex value at least the radius
  SuppressionInstance busy = basic_instance(mu, 0.05);
  const Phi0Result some = build_phi0(busy);
  CHECK(some.suppressed_mass_fraction > 0.0);
  CHECK(some.containment_violations == 0);
  for (const auto& cone : some.phi0.cones())
    CHECK(some.phi0(cone.apex) >= cone.height - 1e-15);

  // mass bound mu(S \ H) <= 2^s C0 lambda0^{-s} mu(R^n) with measured C0
  CHECK(some.s_minus_h_mass <= some.s_mass_bound + 1e-12);

  // exact chain link: past the suppression radius the truncations sit at or
  // below lambda0, so T_{sharp, Phi0(x)} <= lambda0 at every suppressed atom
  const BilinearKernel k0 = scalar_model_kernel(1.0);
  for (size_t i = 0; i < mu.size(); ++i) {
    const double phi_at = some.phi0(mu.atom(i).p);
    if (phi_at == 0.0) continue;
    const double tail =
        maximal_truncation_exact(k0, mu, mu, mu.atom(i).p, phi_at).value;
    CHECK(tail <= busy.lambda0 * (1.0 + 1e-14));
  }

  // 1-Lipschitz by construction
  Rng rng(3);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 1000; ++i)
    pairs.push_back({Point{rng.uniform(-1, 2)}, Point{rng.uniform(-1, 2)}});
  CHECK(lipschitz_audit(some.phi0, pairs) <= 1.0 + 1e-9);
}

TEST_CASE("suppressed maximal truncations stay near lambda0") {
  const AtomicMeasure mu = generate_cantor_1d(3);
  SuppressionInstance inst = basic_instance(mu, 0.0);
  // pick lambda0 by the doubling scan
  double lambda0 = 0.05;
  Phi0Result ph;
  for (int i = 0; i < 20; ++i) {
    inst.lambda0 = lambda0;
    ph = build_phi0(inst);
    if (ph.zero_set_mass_fraction >= 0.5) break;
    lambda0 *= 2.0;
  }
  const SuppressionVerification ver = verify_suppression(inst, ph.phi0);
  CHECK(ver.phi_dominates);
  CHECK(ver.sup_suppressed_sharp <= lambda0 + 64.0 * lambda0);

  // a floor raised above phi0 only helps
  LipschitzProfile raised = LipschitzProfile::max(
      ph.phi0, LipschitzProfile::constant(0.01));
  const SuppressionVerification ver2 = verify_suppression(inst, raised);
  CHECK(ver2.phi_dominates);

  // profiles below phi0 are rejected with witnesses
  if (!ph.phi0.is_zero()) {
    const SuppressionVerification bad =
        verify_suppression(inst, LipschitzProfile::zero());
    CHECK_FALSE(bad.phi_dominates);
    CHECK(!bad.witnesses.empty());
  }
}

TEST_CASE("A_phi is pointwise monotone in the profile") {
  // raising the profile can only lower the damping factor at fixed points
  Rng rng(9);
  LipschitzProfile phi;
  phi.add_cone(Point{0.2}, 0.8);
  const LipschitzProfile raised =
      LipschitzProfile::max(phi, LipschitzProfile::constant(0.3));
  for (int i = 0; i < 1000; ++i) {
    const Point x{rng.uniform(-2, 2)}, y{rng.uniform(-2, 2)},
        z{rng.uniform(-2, 2)};
    if (dist(x, y) + dist(x, z) == 0.0) continue;
    CHECK(eval_A_phi(raised, 1.0, x, y, z) <=
          eval_A_phi(phi, 1.0, x, y, z) + 1e-15);
  }
}

TEST_CASE("suppression comparison chain") {
  const AtomicMeasure mu = generate_cantor_1d(2);
  const BilinearKernel k = scalar_model_kernel(1.0);
  Rng rng(5);
  std::vector<cplx> f(mu.size()), g(mu.size());
  for (auto& v : f) v = rng.uniform(-1.0, 1.0);
  for (auto& v : g) v = rng.uniform(-1.0, 1.0);
  LipschitzProfile phi;
  phi.add_cone(mu.atom(1).p, 0.3);
  const double c = suppression_comparison_constant(k, mu, phi, f, g);
  CHECK(std::isfinite(c));
  CHECK(c <= 64.0);

  // the measured constant stays bounded across instances and profiles
  double worst = 0.0;
  for (uint64_t seed : {11ull, 12ull, 13ull, 14ull, 15ull}) {
    Rng sub(seed);
    const AtomicMeasure inst = generate_random(1, 12, sub.next_u64());
    std::vector<cplx> fi(inst.size()), gi(inst.size());
    for (auto& v : fi) v = sub.uniform(-1.0, 1.0);
    for (auto& v : gi) v = sub.uniform(-1.0, 1.0);
    LipschitzProfile pr;
    pr.add_cone(inst.atom(sub.next_below(static_cast<uint32_t>(inst.size()))).p,
                sub.uniform(0.1, 0.6));
    worst = std::max(
        worst, suppression_comparison_constant(k, inst, pr, fi, gi));
  }
  CHECK(worst <= 64.0);
}
