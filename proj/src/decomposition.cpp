#include "bcz/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace bcz {

namespace {

// cd1 predicate at centred halfside h (closed cubes)
bool cd1_holds(const AtomicMeasure& nu, const AtomicMeasure& mu,
               const Point& c, double h, double lambda, int n) {
  const double lhs = [&] {
    KahanSum s;
    for (const auto& a : nu.atoms())
      if (dist_inf(c, a.p) <= h) s.add(std::abs(a.w));
    return s.value();
  }();
  const double rhs = lambda * std::pow(2.0, -(n + 1)) *
                     mu.mass_cube(Cube(c, 2.0 * h, true)).real();
  return lhs > rhs;
}

}  // namespace

CZDecomposition cz_decompose(const AtomicMeasure& nu, const AtomicMeasure& mu,
                             double lambda, double m) {
  if (!mu.nonneg()) fail("cz_decompose: mu must be nonnegative");
  const int n = mu.dim();
  const double norm_nu = nu.total_variation();
  const double norm_mu = mu.total_variation();
  if (!(lambda > std::pow(2.0, n + 1) * norm_nu / norm_mu))
    fail("cz_decompose: lambda at or below the admissible threshold");

  CZDecomposition out;
  out.lambda = lambda;

  // mu mass at exact atom positions of nu (for the density test)
  auto mu_point_mass = [&](const Point& p) {
    KahanSum s;
    for (const auto& a : mu.atoms())
      if (same_point(a.p, p)) s.add(a.w.real());
    return s.value();
  };

  // Atoms violating the pointwise density bound must be covered by cubes.
  struct Candidate {
    Point center;
    double h;
  };
  std::vector<Candidate> candidates;
  for (const auto& a : nu.atoms()) {
    if (a.w == cplx(0.0, 0.0)) continue;
    const double wmu = mu_point_mass(a.p);
    if (std::abs(a.w) <= lambda * wmu) continue;  // density fine, stays outside

    // Combined breakpoints of h -> |nu|(Q(c,h)) (jumps at d_inf) and
    // h -> mu(2Q(c,h)) (jumps at d_inf/2); cd1 is constant between them.
    std::vector<double> cuts{0.0};
    for (const auto& q : nu.atoms()) cuts.push_back(dist_inf(a.p, q.p));
    for (const auto& q : mu.atoms()) cuts.push_back(dist_inf(a.p, q.p) / 2.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // last interval [t_i, t_{i+1}) on which cd1 holds; the pre-condition on
    // lambda makes cd1 fail for all large h, so it is a proper interval
    int last = -1;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cd1_holds(nu, mu, a.p, cuts[i], lambda, n)) last = static_cast<int>(i);
    if (last < 0) {
      // cd1 already fails arbitrarily close to zero; only possible when the
      // first interval is degenerate, retry just above zero
      fail("cz_decompose: no admissible cube for a heavy atom");
    }
    const double t_lo = cuts[last];
    const double t_hi = cuts[last + 1];
    // pick h in [t_hi/2, t_hi) so that every eta-dilate with eta > 2 lands
    // where cd1 fails; that is exactly cd2
    double h = std::max(t_lo, t_hi / 2.0);
    if (h <= 0.0) h = t_hi / 2.0;
    candidates.push_back({a.p, h});
  }

  // Besicovitch-style greedy selection by decreasing side; keep a cube only
  // if its centre is not yet covered.
  std::vector<size_t> order(candidates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (candidates[a].h != candidates[b].h) return candidates[a].h > candidates[b].h;
    return a < b;
  });
  for (size_t idx : order) {
    const auto& c = candidates[idx];
    bool covered = false;
    for (const auto& q : out.cubes)
      if (q.contains(c.center)) covered = true;
    if (!covered) out.cubes.emplace_back(c.center, c.h, true);
  }

  // hosts, weights, alpha
  out.atom_cover_count.assign(nu.size(), 0);
  for (size_t i = 0; i < nu.size(); ++i)
    for (const auto& q : out.cubes)
      if (q.contains(nu.atom(i).p)) ++out.atom_cover_count[i];

  for (const auto& q : out.cubes) {
    const Cube host = smallest_big_doubling_ancestor(mu, q, m);
    out.hosts.push_back(host);
    KahanSumC wi;
    for (size_t i = 0; i < nu.size(); ++i) {
      if (out.atom_cover_count[i] == 0) continue;
      if (!q.contains(nu.atom(i).p)) continue;
      wi.add(nu.atom(i).w / static_cast<double>(out.atom_cover_count[i]));
    }
    out.w_integral.push_back(wi.value());
    const double host_mass = mu.mass_cube(host).real();
    if (host_mass > 0.0) {
      out.alpha.push_back(wi.value() / host_mass);
    } else if (wi.value() == cplx(0.0, 0.0)) {
      out.alpha.push_back(cplx(0.0, 0.0));
    } else {
      fail("cz_decompose: doubling host carries no mass under a loaded cube");
    }
  }

  // good part f = dnu/dmu atomwise off the cubes
  out.good_f.assign(nu.size(), cplx(0.0, 0.0));
  for (size_t i = 0; i < nu.size(); ++i) {
    if (out.atom_cover_count[i] > 0) continue;
    const double wmu = mu_point_mass(nu.atom(i).p);
    if (wmu > 0.0) {
      out.good_f[i] = nu.atom(i).w / wmu;
    } else if (nu.atom(i).w != cplx(0.0, 0.0)) {
      fail("cz_decompose: uncovered nu-atom with no mu mass");
    }
  }
  return out;
}

CZVerification cz_verify(const CZDecomposition& d, const AtomicMeasure& nu,
                         const AtomicMeasure& mu, double m) {
  CZVerification v;
  const int n = mu.dim();
  const double c_level = d.lambda * std::pow(2.0, -(n + 1));

  v.cd1 = true;
  v.cd2 = true;
  for (size_t i = 0; i < d.cubes.size(); ++i) {
    const Cube& q = d.cubes[i];
    double nu_q = 0.0;
    for (const auto& a : nu.atoms())
      if (q.contains(a.p)) nu_q += std::abs(a.w);
    if (!(nu_q > c_level * mu.mass_cube(q.scaled(2.0)).real())) v.cd1 = false;

    // cd2 over [2, eta_max] at the combined breakpoints plus a geometric grid
    std::vector<double> etas{2.0};
    const double eta_max =
        2.0 * (mu.diameter() + nu.diameter() + q.side()) / q.side() + 4.0;
    for (double e = 4.0; e < eta_max; e *= 2.0) etas.push_back(e);
    for (const auto& a : nu.atoms())
      etas.push_back(dist_inf(q.center, a.p) / q.halfside);
    for (const auto& a : mu.atoms())
      etas.push_back(dist_inf(q.center, a.p) / (2.0 * q.halfside));
    std::sort(etas.begin(), etas.end());
    for (double eta : etas) {
      if (eta < 2.0 || eta > eta_max) continue;
      if (eta == 2.0) eta = std::nextafter(2.0, 3.0);  // strict eta > 2
      double nu_eta = 0.0;
      for (const auto& a : nu.atoms())
        if (dist_inf(q.center, a.p) <= eta * q.halfside) nu_eta += std::abs(a.w);
      const double mu_2eta =
          mu.mass_cube(Cube(q.center, 2.0 * eta * q.halfside, true)).real();
      if (!(nu_eta <= c_level * mu_2eta)) {
        v.cd2 = false;
        break;
      }
    }
    if (!v.cd2) break;
  }

  // cd3: |f| <= lambda on uncovered atoms and nu = f dmu there
  v.cd3 = true;
  for (size_t i = 0; i < nu.size(); ++i) {
    if (d.atom_cover_count[i] > 0) continue;
    if (std::abs(d.good_f[i]) > d.lambda * (1.0 + 1e-12)) v.cd3 = false;
  }

  v.cd4 = true;  // structural: phi_i = alpha_i 1_{R_i}

  // cd5 exactly: int phi_i dmu = alpha_i mu(R_i) = int w_i dnu
  v.cd5 = true;
  for (size_t i = 0; i < d.hosts.size(); ++i) {
    const double host_mass = mu.mass_cube(d.hosts[i]).real();
    const double err = std::abs(d.alpha[i] * host_mass - d.w_integral[i]);
    const double scale = std::max(1e-300, std::abs(d.w_integral[i]));
    v.worst_cd5_error = std::max(v.worst_cd5_error, err / scale);
    if (err > 1e-12 * std::max(1.0, scale)) v.cd5 = false;
  }

  // cd6: pointwise sum of |phi_i| over mu-atoms
  for (const auto& a : mu.atoms()) {
    double s = 0.0;
    for (size_t i = 0; i < d.hosts.size(); ++i)
      if (d.hosts[i].contains(a.p)) s += std::abs(d.alpha[i]);
    v.measured_B = std::max(v.measured_B, s / d.lambda);
  }
  v.cd6 = true;  // B is a measured output; the ceiling is applied by callers

  // cd7: ||phi_i||_inf mu(R_i) <= 2 |nu|(Q_i)
  v.cd7 = true;
  for (size_t i = 0; i < d.hosts.size(); ++i) {
    double nu_q = 0.0;
    for (const auto& a : nu.atoms())
      if (d.cubes[i].contains(a.p)) nu_q += std::abs(a.w);
    const double lhs =
        std::abs(d.alpha[i]) * mu.mass_cube(d.hosts[i]).real();
    if (!(lhs <= 2.0 * nu_q * (1.0 + 1e-12))) v.cd7 = false;
  }

  // beta_i(R_i) = 0: int over R_i of (w_i dnu - phi_i dmu)
  v.beta_zero_mass = true;
  for (size_t i = 0; i < d.hosts.size(); ++i) {
    KahanSumC beta;
    for (size_t a = 0; a < nu.size(); ++a) {
      if (d.atom_cover_count[a] == 0 || !d.cubes[i].contains(nu.atom(a).p))
        continue;
      // w_i is supported on Q_i; R_i contains Q_i so the whole term counts
      beta.add(nu.atom(a).w / static_cast<double>(d.atom_cover_count[a]));
    }
    beta.add(-d.alpha[i] * mu.mass_cube(d.hosts[i]).real());
    const double mass = std::abs(beta.value());
    v.worst_beta_mass = std::max(v.worst_beta_mass, mass);
    if (mass > 1e-12 * std::max(1.0, std::abs(d.w_integral[i])))
      v.beta_zero_mass = false;
  }

  for (int c : d.atom_cover_count) v.max_overlap = std::max(v.max_overlap, c);

  // host tail: int_{R_i \ Q_i} dmu(x)/|x - c_{Q_i}|^m, measured
  for (size_t i = 0; i < d.hosts.size(); ++i) {
    KahanSum tail;
    for (const auto& a : mu.atoms()) {
      if (!d.hosts[i].contains(a.p) || d.cubes[i].contains(a.p)) continue;
      const double r = dist(d.cubes[i].center, a.p);
      if (r > 0.0) tail.add(a.w.real() / std::pow(r, m));
    }
    v.doubling_tail_constant = std::max(v.doubling_tail_constant, tail.value());
  }
  return v;
}

std::string cz_to_json(const CZDecomposition& d) {
  nlohmann::json j;
  j["lambda"] = d.lambda;
  auto dump_cube = [](const Cube& q) {
    nlohmann::json e;
    auto xs = nlohmann::json::array();
    for (int i = 0; i < q.dim(); ++i) xs.push_back(q.center.x[i]);
    e["center"] = xs;
    e["halfside"] = q.halfside;
    return e;
  };
  auto cubes = nlohmann::json::array();
  for (const auto& q : d.cubes) cubes.push_back(dump_cube(q));
  j["cubes"] = cubes;
  auto hosts = nlohmann::json::array();
  for (const auto& q : d.hosts) hosts.push_back(dump_cube(q));
  j["hosts"] = hosts;
  auto alphas = nlohmann::json::array();
  for (const auto& a : d.alpha) {
    nlohmann::json e;
    e["re"] = a.real();
    e["im"] = a.imag();
    alphas.push_back(e);
  }
  j["alpha"] = alphas;
  j["cover_count"] = d.atom_cover_count;
  return j.dump(2);
}

// ---- Whitney ----------------------------------------------------------------

WhitneyCover whitney(const BoxUnion& omega, const AtomicMeasure& mu, double t,
                     int max_depth) {
  if (omega.empty()) fail("whitney: empty region");
  WhitneyCover out;
  const int dim = omega.boxes().front().dim();
  const Cube bb = omega.bounding_box();

  // start coarse enough that no starting cube can satisfy 10Q inside Omega
  int k_start = 0;
  while (std::ldexp(1.0, -k_start) > 2.0 * bb.side()) ++k_start;
  while (std::ldexp(1.0, -k_start) < 2.0 * bb.side()) --k_start;

  struct Item {
    int level;
    std::array<int64_t, kMaxDim> coord;
  };
  auto geom = [&](const Item& it) {
    const double s = std::ldexp(1.0, -it.level);
    Point c = Point::zero(dim);
    for (int i = 0; i < dim; ++i)
      c.x[i] = (static_cast<double>(it.coord[i]) + 0.5) * s;
    return Cube(c, s / 2.0, true);  // closed dyadic cubes
  };

  std::vector<Item> frontier;
  {
    const double s = std::ldexp(1.0, -k_start);
    std::array<int64_t, kMaxDim> lo{}, hi{};
    for (int i = 0; i < dim; ++i) {
      lo[i] = static_cast<int64_t>(std::floor(bb.lo(i) / s));
      hi[i] = static_cast<int64_t>(std::floor(bb.hi(i) / s));
    }
    std::array<int64_t, kMaxDim> c = lo;
    for (;;) {
      frontier.push_back({k_start, c});
      int i = 0;
      while (i < dim && ++c[i] > hi[i]) {
        c[i] = lo[i];
        ++i;
      }
      if (i == dim) break;
    }
  }

  // Boundary slivers get pruned once they carry no atoms: the cover stays
  // complete in mu-measure (verified exactly) and geometrically down to the
  // pruning scale.
  auto holds_atom = [&](const Cube& q) {
    for (const auto& a : mu.atoms())
      if (q.contains(a.p) && omega.contains_point(a.p)) return true;
    return false;
  };

  const int k_stop = k_start + max_depth;
  const int k_full = k_start + 6;  // full geometric tiling down to here
  while (!frontier.empty()) {
    std::vector<Item> next;
    for (const auto& it : frontier) {
      const Cube q = geom(it);
      if (!omega.intersects_box(q)) continue;
      if (omega.covers_box(q.scaled(10.0))) {
        out.cubes.push_back(q);
        continue;
      }
      if (it.level >= k_stop) continue;
      if (it.level >= k_full && !holds_atom(q)) continue;
      for (unsigned b = 0; b < (1u << dim); ++b) {
        Item child;
        child.level = it.level + 1;
        for (int i = 0; i < dim; ++i)
          child.coord[i] = 2 * it.coord[i] + ((b >> i) & 1u);
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }

  std::sort(out.cubes.begin(), out.cubes.end(), [](const Cube& a, const Cube& b) {
    if (a.halfside != b.halfside) return a.halfside > b.halfside;
    for (int i = 0; i < a.dim(); ++i)
      if (a.center.x[i] != b.center.x[i]) return a.center.x[i] < b.center.x[i];
    return false;
  });

  // realized overlap bound of the 10 Q_i
  for (size_t i = 0; i < out.cubes.size(); ++i) {
    int count = 0;
    const Cube ti = out.cubes[i].scaled(10.0);
    for (size_t j = 0; j < out.cubes.size(); ++j) {
      const Cube tj = out.cubes[j].scaled(10.0);
      bool meet = true;
      for (int a = 0; a < ti.dim(); ++a)
        if (ti.hi(a) < tj.lo(a) || tj.hi(a) < ti.lo(a)) meet = false;
      if (meet) ++count;
    }
    out.d0 = std::max(out.d0, count);
  }
  if (out.d0 == 0) out.d0 = 1;

  // refinement: greedy by decreasing mass; enlarge within [Q, 1.1Q] to a
  // (9, 2 D0)-doubling cube with t-small boundary, disjoint from the accepted
  const double mass_target = [&] {
    KahanSum s;
    for (const auto& a : mu.atoms())
      if (omega.contains_point(a.p)) s.add(std::abs(a.w));
    return s.value() / (8.0 * out.d0);
  }();

  std::vector<size_t> order(out.cubes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double ma = std::abs(mu.mass_cube(out.cubes[a]));
    const double mb = std::abs(mu.mass_cube(out.cubes[b]));
    if (ma != mb) return ma > mb;
    return a < b;
  });

  KahanSum accepted_mass;
  for (size_t idx : order) {
    if (accepted_mass.value() >= mass_target && !out.refined.empty()) break;
    const Cube& q = out.cubes[idx];
    std::optional<Cube> pick;
    for (int s = 0; s <= 32; ++s) {
      const Cube cand(q.center, q.halfside * (1.0 + 0.1 * s / 32.0), true);
      if (!is_doubling(mu, cand, 9.0, 2.0 * out.d0)) continue;
      if (!has_small_boundary(mu, cand, t)) continue;
      bool disjoint = true;
      for (const auto& r : out.refined) {
        bool meet = true;
        for (int a = 0; a < cand.dim(); ++a)
          if (cand.hi(a) < r.lo(a) || r.hi(a) < cand.lo(a)) meet = false;
        if (meet) disjoint = false;
      }
      if (!disjoint) break;
      pick = cand;
      break;
    }
    if (pick) {
      out.refined.push_back(*pick);
      out.refined_index.push_back(static_cast<int>(idx));
      accepted_mass.add(std::abs(mu.mass_cube(*pick)));
    }
  }
  return out;
}

WhitneyVerification whitney_verify(const WhitneyCover& cover,
                                   const BoxUnion& omega,
                                   const AtomicMeasure& mu, double t) {
  WhitneyVerification v;
  v.ten_q_inside = true;
  v.r_q_meets_complement = true;
  for (const auto& q : cover.cubes) {
    if (!omega.covers_box(q.scaled(10.0))) v.ten_q_inside = false;
    if (!omega.meets_complement(q.scaled(cover.R)))
      v.r_q_meets_complement = false;
  }

  for (size_t i = 0; i < cover.cubes.size(); ++i) {
    int count = 0;
    const Cube ti = cover.cubes[i].scaled(10.0);
    for (size_t j = 0; j < cover.cubes.size(); ++j) {
      const Cube tj = cover.cubes[j].scaled(10.0);
      bool meet = true;
      for (int a = 0; a < ti.dim(); ++a)
        if (ti.hi(a) < tj.lo(a) || tj.hi(a) < ti.lo(a)) meet = false;
      if (!meet) continue;
      ++count;
      const double ratio = cover.cubes[i].halfside / cover.cubes[j].halfside;
      v.worst_side_ratio = std::max(v.worst_side_ratio, std::max(ratio, 1.0 / ratio));
    }
    v.max_overlap = std::max(v.max_overlap, count);
  }
  v.comparable_neighbors = v.worst_side_ratio <= 64.0;

  v.refined_doubling_small_boundary = true;
  for (const auto& r : cover.refined) {
    if (!is_doubling(mu, r, 9.0, 2.0 * cover.d0))
      v.refined_doubling_small_boundary = false;
    if (!has_small_boundary(mu, r, t)) v.refined_doubling_small_boundary = false;
  }

  v.refined_disjoint = true;
  for (size_t i = 0; i < cover.refined.size(); ++i)
    for (size_t j = i + 1; j < cover.refined.size(); ++j) {
      bool meet = true;
      for (int a = 0; a < cover.refined[i].dim(); ++a)
        if (cover.refined[i].hi(a) < cover.refined[j].lo(a) ||
            cover.refined[j].hi(a) < cover.refined[i].lo(a))
          meet = false;
      if (meet) v.refined_disjoint = false;
    }

  KahanSum omega_mass, refined_mass;
  v.atoms_covered = true;
  for (const auto& a : mu.atoms()) {
    if (!omega.contains_point(a.p)) continue;
    omega_mass.add(std::abs(a.w));
    bool in_cover = false;
    for (const auto& q : cover.cubes)
      if (q.contains(a.p)) in_cover = true;
    if (!in_cover) v.atoms_covered = false;
  }
  for (const auto& r : cover.refined) refined_mass.add(std::abs(mu.mass_cube(r)));
  v.mass_fraction =
      omega_mass.value() > 0.0 ? refined_mass.value() / omega_mass.value() : 1.0;
  v.refined_mass = refined_mass.value() >=
                   omega_mass.value() / (8.0 * cover.d0) - 1e-15;
  return v;
}

std::string whitney_to_json(const WhitneyCover& c) {
  nlohmann::json j;
  j["R"] = c.R;
  j["d0"] = c.d0;
  auto dump = [](const Cube& q) {
    nlohmann::json e;
    auto xs = nlohmann::json::array();
    for (int i = 0; i < q.dim(); ++i) xs.push_back(q.center.x[i]);
    e["center"] = xs;
    e["halfside"] = q.halfside;
    return e;
  };
  auto cubes = nlohmann::json::array();
  for (const auto& q : c.cubes) cubes.push_back(dump(q));
  j["cubes"] = cubes;
  auto refined = nlohmann::json::array();
  for (const auto& q : c.refined) refined.push_back(dump(q));
  j["refined"] = refined;
  return j.dump(2);
}

}  // namespace bcz
