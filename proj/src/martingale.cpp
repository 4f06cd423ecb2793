#include "bcz/martingale.hpp"

#include <algorithm>
#include <cmath>

namespace bcz {

namespace {

int integer_u0(double lambda0, double side_q0) {
  // 2^{u0} < lambda0 * side / 4 <= 2^{u0+1}
  const double target = lambda0 * side_q0 / 4.0;
  if (!(target > 0.0)) fail("Testbed: lambda0 * l(Q0) must be positive");
  int u0 = static_cast<int>(std::floor(std::log2(target)));
  while (std::ldexp(1.0, u0) >= target) --u0;
  while (std::ldexp(1.0, u0 + 1) < target) ++u0;
  return u0;
}

}  // namespace

Testbed::Testbed(const AtomicMeasure& mu, const Cube& q0, double lambda0,
                 uint64_t grid_seed)
    : mu_(&mu), q0_(q0), lambda0_(lambda0) {
  u0_ = integer_u0(lambda0, q0.side());
  const int k_top = -u0_;

  // depth needed to separate the atoms: side sqrt(n) below min separation
  const double sep = mu.min_separation();
  if (sep == 0.0) fail("Testbed: coincident atoms");
  int k_deep = k_top + 1;
  if (std::isfinite(sep)) {
    const double need = sep / std::sqrt(static_cast<double>(mu.dim()));
    while (std::ldexp(1.0, -k_deep) >= need) ++k_deep;
    ++k_deep;  // slack level
  }
  grid_ = DyadicGrid::from_seed(grid_seed, mu.dim(), k_top, k_deep);
  build();
}

void Testbed::build() {
  const AtomicMeasure& mu = *mu_;
  const int k_top = -u0_;

  std::unordered_map<CubeRef, std::vector<int>, CubeRefHash> top_atoms;
  for (size_t i = 0; i < mu.size(); ++i) {
    if (mu.atom(i).w == cplx(0.0, 0.0)) continue;  // carries no mu-integral
    const CubeRef ref = grid_.cube_containing(mu.atom(i).p, k_top);
    const Cube geom = grid_.geometry(ref);
    if (q0_.contains_cube(geom)) {
      top_atoms[ref].push_back(static_cast<int>(i));
    } else {
      uncovered_.push_back(static_cast<int>(i));
    }
  }

  // canonical order: sort top cubes by coordinates for determinism
  std::vector<CubeRef> tops;
  for (const auto& [ref, atoms] : top_atoms) tops.push_back(ref);
  std::sort(tops.begin(), tops.end(), [](const CubeRef& a, const CubeRef& b) {
    return a.coord < b.coord;
  });

  auto node_mass = [&](const std::vector<int>& atoms) {
    KahanSum s;
    for (int i : atoms) s.add(mu.atom(i).w.real());
    return s.value();
  };

  // BFS split of multi-atom nodes down to single-atom leaves
  for (const auto& ref : tops) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{ref, grid_.geometry(ref), -1, {}, top_atoms[ref],
                          node_mass(top_atoms[ref])});
    tops_.push_back(id);
    covered_.insert(covered_.end(), top_atoms[ref].begin(),
                    top_atoms[ref].end());
  }
  for (size_t cursor = 0; cursor < nodes_.size(); ++cursor) {
    // Top-scale cubes always split once: their Delta uses plain E-numbers on
    // the children, which are nonzero even over a single atom.  Deeper
    // single-atom cubes are leaves (their D-numbers telescope to zero).
    if (nodes_[cursor].atoms.size() <= 1 && nodes_[cursor].parent >= 0)
      continue;
    const CubeRef ref = nodes_[cursor].ref;
    if (ref.level + 1 > grid_.k_max()) fail("Testbed: window too shallow");
    std::unordered_map<CubeRef, std::vector<int>, CubeRefHash> split;
    for (int i : nodes_[cursor].atoms) {
      // assign by descending the tree, not by re-flooring, so membership is
      // exactly consistent with the integer parent/child arithmetic
      CubeRef child = grid_.cube_containing(mu.atom(i).p, ref.level + 1);
      split[child].push_back(i);
    }
    std::vector<CubeRef> order;
    for (const auto& [cref, atoms] : split) order.push_back(cref);
    std::sort(order.begin(), order.end(), [](const CubeRef& a, const CubeRef& b) {
      return a.coord < b.coord;
    });
    for (const auto& cref : order) {
      if (!(grid_.parent(cref) == ref))
        fail("Testbed: atom crossed a cube boundary (fp tie)");
      const int cid = static_cast<int>(nodes_.size());
      nodes_.push_back(Node{cref, grid_.geometry(cref),
                            static_cast<int>(cursor), {}, split[cref],
                            node_mass(split[cref])});
      nodes_[cursor].children.push_back(cid);
    }
  }
}

AccretiveSystem::AccretiveSystem(const Testbed& bed, std::vector<cplx> b,
                                 double c_b)
    : bed_(&bed), b_(std::move(b)), c_b_(c_b) {
  if (b_.size() != bed.mu().size()) fail("AccretiveSystem: size mismatch");
  for (const auto& v : b_) sup_norm_ = std::max(sup_norm_, std::abs(v));
  avg_b_.resize(bed.node_count());
  for (size_t i = 0; i < bed.node_count(); ++i) {
    const auto& node = bed.node(i);
    KahanSumC s;
    for (int a : node.atoms) s.add(b_[a] * bed.mu().atom(a).w);
    avg_b_[i] = node.mass > 0.0 ? s.value() / node.mass : cplx(0.0, 0.0);
    if (std::abs(avg_b_[i]) < c_b_)
      fail("AccretiveSystem: accretivity violated on a grid cube");
  }
}

cplx AccretiveSystem::avg_f(int node, const std::vector<cplx>& f) const {
  const auto& n = bed_->node(node);
  if (n.mass <= 0.0) return 0.0;
  KahanSumC s;
  for (int a : n.atoms) s.add(f[a] * bed_->mu().atom(a).w);
  return s.value() / n.mass;
}

cplx AccretiveSystem::avg_b(int node) const { return avg_b_[node]; }

cplx AccretiveSystem::e_op(int node, const std::vector<cplx>& f) const {
  return avg_f(node, f) / avg_b_[node];
}

cplx AccretiveSystem::d_op(int node, const std::vector<cplx>& f) const {
  const auto& n = bed_->node(node);
  if (n.parent < 0) fail("d_op: defined for levels below the top scale");
  const cplx own = e_op(node, f);
  // side 2^{u0-1} cubes use E alone; deeper ones difference with the parent
  if (bed_->node(n.parent).parent < 0) return own;
  return own - e_op(n.parent, f);
}

std::vector<cplx> AccretiveSystem::delta(int node,
                                         const std::vector<cplx>& f) const {
  std::vector<cplx> out(bed_->mu().size(), cplx(0.0, 0.0));
  const auto& n = bed_->node(node);
  for (int child : n.children) {
    const cplx d = d_op(child, f);
    for (int a : bed_->node(child).atoms) out[a] = d * b_[a];
  }
  return out;
}

std::vector<cplx> AccretiveSystem::delta_adj(int node,
                                             const std::vector<cplx>& f) const {
  std::vector<cplx> out(bed_->mu().size(), cplx(0.0, 0.0));
  const auto& n = bed_->node(node);
  // single-atom leaf: the child average and the cube average agree at the
  // atom, so the adjoint difference vanishes identically on the support
  if (n.children.empty()) return out;
  auto avg_fb = [&](int id) {
    const auto& nd = bed_->node(id);
    if (nd.mass <= 0.0) return cplx(0.0, 0.0);
    KahanSumC s;
    for (int a : nd.atoms) s.add(f[a] * b_[a] * bed_->mu().atom(a).w);
    return s.value() / nd.mass;
  };
  for (int child : n.children) {
    const cplx v = avg_fb(child) / avg_b_[child];
    for (int a : bed_->node(child).atoms) out[a] += v;
  }
  if (n.parent >= 0) {
    // below the top scale the projection onto Q is subtracted
    const cplx v = avg_fb(node) / avg_b_[node];
    for (int a : n.atoms) out[a] -= v;
  }
  return out;
}

std::vector<cplx> AccretiveSystem::reconstruct(const std::vector<cplx>& f) const {
  std::vector<cplx> out(bed_->mu().size(), cplx(0.0, 0.0));
  for (size_t q = 0; q < bed_->node_count(); ++q) {
    const auto& n = bed_->node(q);
    for (int child : n.children) {
      const cplx d = d_op(child, f);
      for (int a : bed_->node(child).atoms) out[a] += d * b_[a];
    }
  }
  return out;
}

std::vector<cplx> AccretiveSystem::reconstruction_remainder(
    const std::vector<cplx>& f) const {
  std::vector<cplx> rec = reconstruct(f);
  std::vector<cplx> out(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    // zero-weight atoms carry no mu-mass; the L^s(mu) identity ignores them
    out[i] = bed_->mu().atom(i).w == cplx(0.0, 0.0) ? cplx(0.0, 0.0)
                                                    : f[i] - rec[i];
  }
  return out;
}

std::vector<double> AccretiveSystem::square_function(
    const std::vector<cplx>& f) const {
  std::vector<double> acc(bed_->mu().size(), 0.0);
  for (size_t q = 0; q < bed_->node_count(); ++q) {
    const auto& n = bed_->node(q);
    if (n.parent < 0) continue;  // D numbers live below the top scale
    const cplx d = d_op(static_cast<int>(q), f);
    const double d2 = std::norm(d);
    if (d2 == 0.0) continue;
    for (int a : n.atoms) acc[a] += d2;
  }
  for (auto& v : acc) v = std::sqrt(v);
  return acc;
}

std::vector<double> AccretiveSystem::square_function_adj(
    const std::vector<cplx>& f) const {
  std::vector<double> acc(bed_->mu().size(), 0.0);
  for (size_t q = 0; q < bed_->node_count(); ++q) {
    const std::vector<cplx> da = delta_adj(static_cast<int>(q), f);
    for (size_t a = 0; a < da.size(); ++a) acc[a] += std::norm(da[a]);
  }
  for (auto& v : acc) v = std::sqrt(v);
  return acc;
}

bool GoodnessFilter::passes(const Cube& geom, int level,
                            int* indeterminate_seen) const {
  for (const DyadicGrid* g : others) {
    const Goodness s = is_good(geom, level, *g, params);
    if (s == Goodness::Bad) return false;
    if (s == Goodness::Indeterminate) {
      if (indeterminate_seen) ++*indeterminate_seen;
      if (!indeterminate_counts_good) return false;
    }
  }
  return true;
}

namespace {

std::vector<cplx> project_filtered(const AccretiveSystem& sys,
                                   const std::vector<cplx>& f,
                                   const GoodnessFilter& filter, bool keep_good,
                                   int* indeterminate_count) {
  const Testbed& bed = sys.bed();
  std::vector<cplx> out(bed.mu().size(), cplx(0.0, 0.0));
  int indet = 0;
  for (size_t q = 0; q < bed.node_count(); ++q) {
    const auto& n = bed.node(q);
    const bool good = filter.passes(n.geom, n.ref.level, &indet);
    if (good != keep_good) continue;
    const std::vector<cplx> d = sys.delta(static_cast<int>(q), f);
    for (size_t a = 0; a < d.size(); ++a) out[a] += d[a];
  }
  if (indeterminate_count) *indeterminate_count = indet;
  return out;
}

}  // namespace

std::vector<cplx> project_good(const AccretiveSystem& sys,
                               const std::vector<cplx>& f,
                               const GoodnessFilter& filter,
                               int* indeterminate_count) {
  return project_filtered(sys, f, filter, true, indeterminate_count);
}

std::vector<cplx> project_bad(const AccretiveSystem& sys,
                              const std::vector<cplx>& f,
                              const GoodnessFilter& filter,
                              int* indeterminate_count) {
  return project_filtered(sys, f, filter, false, indeterminate_count);
}

PrincipalCubes principal_cubes(const Testbed& bed, const std::vector<cplx>& phi) {
  PrincipalCubes out;
  const AtomicMeasure& mu = bed.mu();
  auto avg_abs = [&](int id) {
    const auto& n = bed.node(id);
    if (n.mass <= 0.0) return 0.0;
    KahanSum s;
    for (int a : n.atoms) s.add(std::abs(phi[a]) * std::abs(mu.atom(a).w));
    return s.value() / n.mass;
  };

  out.parent_in_family.assign(bed.node_count(), -1);

  // stopping descent: children of S are the maximal cubes whose average
  // exceeds twice the average on S
  std::vector<std::pair<int, int>> to_visit;  // (node, owning family cube)
  for (int t : bed.top_nodes()) {
    out.family.push_back(t);
    out.parent_in_family[t] = t;
    for (int c : bed.node(t).children) to_visit.emplace_back(c, t);
  }
  while (!to_visit.empty()) {
    auto [id, owner] = to_visit.back();
    to_visit.pop_back();
    int new_owner = owner;
    if (avg_abs(id) > 2.0 * avg_abs(owner)) {
      out.family.push_back(id);
      new_owner = id;
    }
    out.parent_in_family[id] = new_owner;
    for (int c : bed.node(id).children) to_visit.emplace_back(c, new_owner);
  }

  // verify the stopping bound and the Carleson packing
  for (size_t id = 0; id < bed.node_count(); ++id) {
    const double denom = avg_abs(out.parent_in_family[id]);
    if (denom > 0.0)
      out.worst_ratio = std::max(out.worst_ratio, avg_abs(static_cast<int>(id)) / denom);
  }
  // packing: sum masses of family cubes inside each family cube
  for (int s : out.family) {
    KahanSum pack;
    const Cube& host = bed.node(s).geom;
    for (int s2 : out.family)
      if (host.contains_cube(bed.node(s2).geom)) pack.add(bed.node(s2).mass);
    if (bed.node(s).mass > 0.0)
      out.packing_constant =
          std::max(out.packing_constant, pack.value() / bed.node(s).mass);
  }
  std::sort(out.family.begin(), out.family.end());
  return out;
}

double dyadic_maximal(const Testbed& bed, const std::vector<cplx>& f, int atom) {
  double best = 0.0;
  for (size_t q = 0; q < bed.node_count(); ++q) {
    const auto& n = bed.node(q);
    if (n.mass <= 0.0) continue;
    bool holds = false;
    for (int a : n.atoms)
      if (a == atom) holds = true;
    if (!holds) continue;
    KahanSum s;
    for (int a : n.atoms)
      s.add(std::abs(f[a]) * std::abs(bed.mu().atom(a).w));
    best = std::max(best, s.value() / n.mass);
  }
  return best;
}

double lp_norm(const AtomicMeasure& mu, const std::vector<cplx>& f, double p) {
  KahanSum s;
  for (size_t i = 0; i < mu.size(); ++i)
    s.add(std::pow(std::abs(f[i]), p) * std::abs(mu.atom(i).w));
  return std::pow(s.value(), 1.0 / p);
}

double lp_norm(const AtomicMeasure& mu, const std::vector<double>& f, double p) {
  KahanSum s;
  for (size_t i = 0; i < mu.size(); ++i)
    s.add(std::pow(std::abs(f[i]), p) * std::abs(mu.atom(i).w));
  return std::pow(s.value(), 1.0 / p);
}

}  // namespace bcz
