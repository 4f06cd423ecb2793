#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bcz/dyadic.hpp"
#include "bcz/martingale.hpp"
#include "bcz/rng.hpp"

using namespace bcz;

TEST_CASE("grids from seeds") {
  const DyadicGrid st = DyadicGrid::standard(2, -2, 6);
  CHECK(st.shift(0, 0) == 0.0);
  const CubeRef r = st.cube_containing(Point{0.3, 0.7}, 1);
  const Cube g = st.geometry(r);
  CHECK(g.lo(0) == doctest::Approx(0.0));
  CHECK(g.lo(1) == doctest::Approx(0.5));
  CHECK(g.side() == doctest::Approx(0.5));

  const DyadicGrid shifted = DyadicGrid::from_seed(1234, 2, -2, 6);
  const DyadicGrid shifted2 = DyadicGrid::from_seed(1234, 2, -2, 6);
  CHECK(shifted.shift(3, 0) == shifted2.shift(3, 0));  // deterministic
  CHECK(shifted.seed_hex() == std::string("4d2"));

  // ancestor/children arithmetic
  const CubeRef deep = shifted.cube_containing(Point{0.31, 0.67}, 5);
  CHECK(shifted.ancestor(deep, 0) == deep);
  const CubeRef up = shifted.ancestor(deep, 2);
  CHECK(up.level == 3);
  const auto kids = shifted.children(up);
  CHECK(kids.size() == 4);  // 2^n
  bool found = false;
  for (const auto& kid : kids)
    if (shifted.geometry(kid).contains(Point{0.31, 0.67})) found = true;
  CHECK(found);
  for (const auto& kid : kids) {
    CHECK(shifted.parent(kid) == up);
    CHECK(up == shifted.ancestor(kid, 1));
  }
  // geometric nesting
  for (const auto& kid : kids)
    CHECK(shifted.geometry(up).contains_cube(shifted.geometry(kid)));
}

TEST_CASE("goodness") {
  const DyadicGrid g = DyadicGrid::standard(1, -4, 12);
  GoodnessParams p{0.5, 4};

  // touching the boundary of a coarser cube of the same family: bad
  const Cube hug(Point{0.5 + 1.0 / 64.0}, 1.0 / 64.0, false);  // 2^-5 cube at 0.5
  CHECK(is_good(hug, 5, g, p) == Goodness::Bad);

  // 1/3 keeps distance l(R)/3 from every dyadic plane, beating the
  // l(Q)^g l(R)^{1-g} threshold at every admissible level for sigma = 4
  const Cube deep(Point{1.0 / 3.0}, 1.0 / 4096.0, false);
  CHECK(is_good(deep, 11, g, p) == Goodness::Good);

  // sigma beyond the stored window: indeterminate
  GoodnessParams far{0.5, 40};
  CHECK(is_good(deep, 11, g, far) == Goodness::Indeterminate);
}

TEST_CASE("bad cube monte carlo trends") {
  GoodnessParams p{0.5, 4};
  const BadProbability p4 = bad_probability_mc(1, 6, p, 4000, 11);
  p.sigma = 8;
  const BadProbability p8 = bad_probability_mc(1, 6, p, 4000, 11);
  CHECK(p8.estimate < p4.estimate);
  CHECK(p8.ci_high < p4.ci_low);  // CI separated

  // doubling the trials shrinks the interval roughly like 1/sqrt(2)
  p.sigma = 4;
  const BadProbability a = bad_probability_mc(1, 6, p, 2000, 13);
  const BadProbability b = bad_probability_mc(1, 6, p, 8000, 13);
  CHECK((b.ci_high - b.ci_low) < (a.ci_high - a.ci_low));
}

namespace {

struct Fixture {
  AtomicMeasure mu = generate_cantor_4corner(2).normalized();
  Cube q0;
  Fixture() : q0(Point{0.5, 0.5}, 0.8, true) {}
};

std::vector<cplx> random_fn(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> out(n);
  for (auto& v : out) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return out;
}

}  // namespace

TEST_CASE("martingale identities") {
  Fixture fx;
  const Testbed bed(fx.mu, fx.q0, 0.5, 42);
  CHECK(bed.uncovered_atoms().empty());

  // accretive b with a wobble
  Rng rng(5);
  std::vector<cplx> b(fx.mu.size());
  for (auto& v : b)
    v = cplx(1.0, 0.0) + 0.3 * cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const AccretiveSystem sys(bed, b, 0.3);

  // f = b: every E-number is 1
  for (size_t q = 0; q < bed.node_count(); ++q)
    CHECK(std::abs(sys.e_op(static_cast<int>(q), b) - cplx(1.0, 0.0)) < 1e-12);

  // constant f with b == 1: Delta vanishes below the top scale
  const AccretiveSystem unit(bed, std::vector<cplx>(fx.mu.size(), 1.0), 0.5);
  const std::vector<cplx> cst(fx.mu.size(), cplx(2.5, 0.0));
  for (size_t q = 0; q < bed.node_count(); ++q) {
    if (bed.node(q).parent < 0) continue;  // top-scale Delta is the average
    const auto d = unit.delta(static_cast<int>(q), cst);
    for (const auto& v : d) CHECK(std::abs(v) < 1e-13);
  }

  const std::vector<cplx> f = random_fn(fx.mu.size(), 7);
  const std::vector<cplx> g = random_fn(fx.mu.size(), 8);

  // reconstruction is exact on the covered atoms
  const auto rem = sys.reconstruction_remainder(f);
  for (const auto& v : rem) CHECK(std::abs(v) < 1e-10);

  // duality <Delta_Q f, g> = <f, Delta*_Q g>
  auto pair_mu = [&](const std::vector<cplx>& u, const std::vector<cplx>& v) {
    KahanSumC s;
    for (size_t i = 0; i < fx.mu.size(); ++i)
      s.add(u[i] * v[i] * fx.mu.atom(i).w);
    return s.value();
  };
  for (size_t q = 0; q < bed.node_count(); q += 3) {
    const auto dq = sys.delta(static_cast<int>(q), f);
    const auto dq_adj = sys.delta_adj(static_cast<int>(q), g);
    const cplx lhs = pair_mu(dq, g);
    const cplx rhs = pair_mu(f, dq_adj);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }

  // orthogonality Delta_Q Delta_R = delta_{QR} Delta_Q
  for (size_t q = 0; q < bed.node_count(); q += 5) {
    const auto dq = sys.delta(static_cast<int>(q), f);
    for (size_t r = 0; r < bed.node_count(); r += 7) {
      const auto dr_dq = sys.delta(static_cast<int>(r), dq);
      for (size_t i = 0; i < fx.mu.size(); ++i) {
        const cplx want = (q == r) ? dq[i] : cplx(0.0, 0.0);
        CHECK(std::abs(dr_dq[i] - want) < 1e-10);
      }
    }
  }

  // zero average below the top scale
  for (size_t q = 0; q < bed.node_count(); ++q) {
    if (bed.node(q).parent < 0) continue;
    const auto dq = sys.delta(static_cast<int>(q), f);
    KahanSumC s;
    for (size_t i = 0; i < fx.mu.size(); ++i) s.add(dq[i] * fx.mu.atom(i).w);
    CHECK(std::abs(s.value()) < 1e-12);
  }

  // S f = 0 for f = 0
  const std::vector<cplx> zero(fx.mu.size(), cplx(0.0, 0.0));
  for (double v : sys.square_function(zero)) CHECK(v == 0.0);
}

TEST_CASE("reconstruction across random grids") {
  Fixture fx;
  const std::vector<cplx> f = random_fn(fx.mu.size(), 3);
  for (uint64_t seed : {1ull, 17ull, 23456ull}) {
    const Testbed bed(fx.mu, fx.q0, 0.5, seed);
    const AccretiveSystem sys(bed, std::vector<cplx>(fx.mu.size(), 1.0), 0.5);
    const auto rem = sys.reconstruction_remainder(f);
    double worst = 0.0;
    for (const auto& v : rem) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("martingale identity fuzz over random measures and systems") {
  Rng rng(5050);
  for (int trial = 0; trial < 8; ++trial) {
    const AtomicMeasure mu = generate_random(2, 24, rng.next_u64());
    const Cube q0 = mu.bounding_cube(0.1);
    const Testbed bed(mu, q0, 0.5, rng.next_u64());
    Rng sub = rng.split();
    std::vector<cplx> b(mu.size());
    for (auto& v : b)
      v = cplx(1.0, 0.0) + 0.4 * cplx(sub.uniform(-1, 1), sub.uniform(-1, 1));
    const AccretiveSystem sys(bed, b, 0.1);
    const std::vector<cplx> f = random_fn(mu.size(), sub.next_u64());
    const std::vector<cplx> g = random_fn(mu.size(), sub.next_u64());

    // reconstruction on covered atoms
    const auto rem = sys.reconstruction_remainder(f);
    std::vector<char> covered(mu.size(), 0);
    for (int a : bed.covered_atoms()) covered[a] = 1;
    for (size_t i = 0; i < mu.size(); ++i)
      if (covered[i]) CHECK(std::abs(rem[i]) < 1e-10);

    // duality on a sample of cubes
    auto pair_mu = [&](const std::vector<cplx>& u, const std::vector<cplx>& v) {
      KahanSumC s;
      for (size_t i = 0; i < mu.size(); ++i) s.add(u[i] * v[i] * mu.atom(i).w);
      return s.value();
    };
    for (size_t q = 0; q < bed.node_count(); q += 4) {
      const cplx lhs = pair_mu(sys.delta(static_cast<int>(q), f), g);
      const cplx rhs = pair_mu(f, sys.delta_adj(static_cast<int>(q), g));
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("good and bad projections split the reconstruction") {
  Fixture fx;
  const Testbed bed(fx.mu, fx.q0, 0.5, 99);
  const AccretiveSystem sys(bed, std::vector<cplx>(fx.mu.size(), 1.0), 0.5);
  const std::vector<cplx> f = random_fn(fx.mu.size(), 9);

  const int lo = bed.grid().k_min() - 10;
  const int hi = bed.grid().k_max();
  const DyadicGrid other1 = DyadicGrid::from_seed(7, fx.mu.dim(), lo, hi);
  const DyadicGrid other2 = DyadicGrid::from_seed(8, fx.mu.dim(), lo, hi);
  GoodnessFilter filter;
  filter.others = {&other1, &other2};
  filter.params = GoodnessParams{0.5, 2};

  int indet = 0;
  const auto pg = project_good(sys, f, filter, &indet);
  const auto pb = project_bad(sys, f, filter);
  const auto rec = sys.reconstruct(f);
  for (size_t i = 0; i < fx.mu.size(); ++i)
    CHECK(std::abs(pg[i] + pb[i] - rec[i]) < 1e-11);

  // enormous sigma: every decidable cube is good, the rest indeterminate and
  // counted as good under the lenient flag
  GoodnessFilter huge = filter;
  huge.params.sigma = 60;
  const auto pb2 = project_bad(sys, f, huge);
  for (const auto& v : pb2) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("principal cubes") {
  Fixture fx;
  // coarse top scale so the top cubes hold whole atom clusters
  const Testbed bed(fx.mu, fx.q0, 2.0, 4);
  bool has_multi = false;
  for (int t : bed.top_nodes())
    if (bed.node(t).atoms.size() > 1) has_multi = true;
  REQUIRE(has_multi);

  // constant phi: only the top cubes enter
  const PrincipalCubes flat =
      principal_cubes(bed, std::vector<cplx>(fx.mu.size(), 1.0));
  CHECK(flat.family.size() == bed.top_nodes().size());
  CHECK(flat.worst_ratio <= 2.0 + 1e-12);

  // a heavy atom among at least three neighbours forces a stopping chain
  int spike_atom = -1;
  size_t best_top = 0;
  for (int t : bed.top_nodes())
    if (bed.node(t).atoms.size() > best_top) {
      best_top = bed.node(t).atoms.size();
      spike_atom = bed.node(t).atoms.front();
    }
  REQUIRE(best_top >= 3);
  std::vector<cplx> spike(fx.mu.size(), cplx(0.01, 0.0));
  spike[spike_atom] = 50.0;
  const PrincipalCubes heavy = principal_cubes(bed, spike);
  CHECK(heavy.family.size() > bed.top_nodes().size());
  CHECK(heavy.worst_ratio <= 2.0 + 1e-12);
  CHECK(heavy.packing_constant < 16.0);
}

TEST_CASE("average bad-projection norm decreases in sigma") {
  Fixture fx;
  const Testbed bed(fx.mu, fx.q0, 0.5, 3);
  const AccretiveSystem sys(bed, std::vector<cplx>(fx.mu.size(), 1.0), 0.5);
  const std::vector<cplx> f = random_fn(fx.mu.size(), 21);
  const int lo = bed.grid().k_min() - 14;
  const int hi = bed.grid().k_max();

  auto avg_bad_norm = [&](int sigma) {
    Rng rng(77);
    KahanSum acc;
    const int trials = 24;
    for (int t = 0; t < trials; ++t) {
      const DyadicGrid g1 = DyadicGrid::from_seed(rng.next_u64(), 2, lo, hi);
      const DyadicGrid g2 = DyadicGrid::from_seed(rng.next_u64(), 2, lo, hi);
      GoodnessFilter filter;
      filter.others = {&g1, &g2};
      filter.params = GoodnessParams{0.5, sigma};
      const auto pb = project_bad(sys, f, filter);
      acc.add(lp_norm(fx.mu, pb, 2.0));
    }
    return acc.value() / trials;
  };
  const double at2 = avg_bad_norm(2);
  const double at5 = avg_bad_norm(5);
  const double at8 = avg_bad_norm(8);
  CHECK(at5 <= at2 + 1e-12);
  CHECK(at8 <= at5 + 1e-12);
  CHECK(at8 < at2);  // strict drop across the sweep
}

TEST_CASE("dyadic maximal function") {
  Fixture fx;
  const Testbed bed(fx.mu, fx.q0, 2.0, 4);
  // constant function: every cube average is the constant
  const std::vector<cplx> c(fx.mu.size(), cplx(0.4, 0.0));
  for (int t : bed.top_nodes())
    for (int a : bed.node(t).atoms)
      CHECK(dyadic_maximal(bed, c, a) == doctest::Approx(0.4).epsilon(1e-13));
  // a spike dominates on its own leaf
  std::vector<cplx> spike(fx.mu.size(), cplx(0.0, 0.0));
  spike[3] = 5.0;
  CHECK(dyadic_maximal(bed, spike, 3) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("accretivity is validated eagerly") {
  Fixture fx;
  const Testbed bed(fx.mu, fx.q0, 2.0, 42);
  // balance signs over one multi-atom cube so its average collapses
  int multi = -1;
  for (size_t q = 0; q < bed.node_count(); ++q)
    if (bed.node(q).atoms.size() >= 2) multi = static_cast<int>(q);
  REQUIRE(multi >= 0);
  std::vector<cplx> bad_b(fx.mu.size(), cplx(1.0, 0.0));
  const auto& atoms = bed.node(multi).atoms;
  for (size_t j = 0; j < atoms.size(); ++j)
    bad_b[atoms[j]] = (j % 2 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
  CHECK_THROWS(AccretiveSystem(bed, bad_b, 0.9));
}
