#include "bcz/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bcz/common.hpp"
#include "json.hpp"

namespace bcz {

int surgery_level_offset(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) fail("surgery: theta must be in (0,1)");
  int e;
  const double f = std::frexp(theta, &e);  // theta = f 2^e, f in [0.5, 1)
  int j = (f == 0.5) ? e - 22 : e - 21;
  while (std::ldexp(1.0, j) < std::ldexp(theta, -21)) ++j;
  while (std::ldexp(1.0, j) >= std::ldexp(theta, -20)) --j;
  return j;
}

namespace {

// {x in Q : d(x, dQ) >= theta l(Q)}: the concentric closed cube shrunk by a
// theta l(Q) margin on every face.
Cube inner_cube(const Cube& q, double theta) {
  return Cube(q.center, std::max(q.halfside - theta * q.side(), 0.0), true);
}

bool cube_in_all(const Cube& c, const std::vector<const Cube*>& hosts) {
  for (const Cube* h : hosts)
    if (!h->contains_cube(c)) return false;
  return true;
}

}  // namespace

SurgeryPartition surgery_triple(const AtomicMeasure& mu, const Cube& host_i,
                                const Cube& j_cube, const Cube& k_cube,
                                double theta, const DyadicGrid& fourth,
                                int k_level) {
  SurgeryPartition out;
  const int q_level = k_level - surgery_level_offset(theta);
  const double lq = fourth.side(q_level);
  std::unordered_map<CubeRef, std::vector<int>, CubeRefHash> delta;

  for (size_t i = 0; i < mu.size(); ++i) {
    const Point& x = mu.atom(i).p;
    if (!host_i.contains(x)) continue;
    ++out.host_atom_count;
    const CubeRef qref = fourth.cube_containing(x, q_level);
    const Cube q = fourth.geometry(qref);
    const bool in_jk = j_cube.contains(x) && k_cube.contains(x);
    const bool near_j = dist_to_boundary(q, j_cube) < theta * j_cube.side() / 2.0;
    const bool near_k = dist_to_boundary(q, k_cube) < theta * k_cube.side() / 2.0;
    const bool near_q = in_jk && q.boundary_dist(x) < theta * lq;
    if (near_j || near_k || near_q) {
      out.boundary_atoms.push_back(static_cast<int>(i));
    } else if (!in_jk) {
      out.sep_atoms.push_back(static_cast<int>(i));
    } else {
      delta[qref].push_back(static_cast<int>(i));
    }
  }

  std::vector<CubeRef> order;
  for (const auto& [ref, atoms] : delta) order.push_back(ref);
  std::sort(order.begin(), order.end(), [](const CubeRef& a, const CubeRef& b) {
    return a.coord < b.coord;
  });
  const std::vector<const Cube*> hosts{&host_i, &j_cube, &k_cube};
  for (const auto& ref : order) {
    SurgeryPartition::DeltaPiece piece;
    piece.q = ref;
    piece.inner = inner_cube(fourth.geometry(ref), theta);
    piece.atoms = delta[ref];
    piece.piece_is_cube = cube_in_all(piece.inner, hosts);
    piece.five_l_inside = cube_in_all(piece.inner.scaled(5.0), hosts);
    out.delta_pieces.push_back(std::move(piece));
  }
  return out;
}

PairSurgeryResult surgery_pair(const AtomicMeasure& mu, const Cube& host_i,
                               const Cube& k_cube, double theta,
                               const DyadicGrid& fourth, int k_level,
                               double t_small, int scan_points) {
  PairSurgeryResult out;
  SurgeryPartition& part = out.partition;
  const int q_level = k_level - surgery_level_offset(theta);

  // The small-boundary representative S_Q is shared by every atom in Q.
  std::unordered_map<CubeRef, std::optional<Cube>, CubeRefHash> s_cube;
  auto small_boundary_rep = [&](const CubeRef& qref) -> std::optional<Cube> {
    auto it = s_cube.find(qref);
    if (it != s_cube.end()) return it->second;
    const Cube q = fourth.geometry(qref);
    // scan halfsides in [(1-theta) h, (1-theta/2) h]
    std::optional<Cube> found;
    for (int s = 0; s <= scan_points; ++s) {
      const double frac =
          (1.0 - theta) + (theta / 2.0) * static_cast<double>(s) / scan_points;
      const Cube cand(q.center, frac * q.halfside, true);
      if (has_small_boundary(mu, cand, t_small)) {
        found = cand;
        break;
      }
    }
    if (!found) out.failed_small_boundary.push_back(qref);
    s_cube.emplace(qref, found);
    return found;
  };

  std::unordered_map<CubeRef, std::vector<int>, CubeRefHash> delta;
  for (size_t i = 0; i < mu.size(); ++i) {
    const Point& x = mu.atom(i).p;
    if (!host_i.contains(x)) continue;
    ++part.host_atom_count;
    const CubeRef qref = fourth.cube_containing(x, q_level);
    const Cube q = fourth.geometry(qref);
    const bool in_k = k_cube.contains(x);
    const bool near_k = dist_to_boundary(q, k_cube) < theta * k_cube.side() / 2.0;
    bool outside_s = false;
    if (in_k && !near_k) {
      const std::optional<Cube> s = small_boundary_rep(qref);
      outside_s = !s || !s->contains(x);
    }
    if (near_k || (in_k && outside_s)) {
      part.boundary_atoms.push_back(static_cast<int>(i));
    } else if (!in_k) {
      part.sep_atoms.push_back(static_cast<int>(i));
    } else {
      delta[qref].push_back(static_cast<int>(i));
    }
  }

  std::vector<CubeRef> order;
  for (const auto& [ref, atoms] : delta) order.push_back(ref);
  std::sort(order.begin(), order.end(), [](const CubeRef& a, const CubeRef& b) {
    return a.coord < b.coord;
  });
  const std::vector<const Cube*> hosts{&host_i, &k_cube};
  for (const auto& ref : order) {
    SurgeryPartition::DeltaPiece piece;
    piece.q = ref;
    piece.inner = *s_cube[ref];
    piece.atoms = delta[ref];
    piece.piece_is_cube = cube_in_all(piece.inner, hosts);
    piece.five_l_inside = cube_in_all(piece.inner.scaled(5.0), hosts);
    part.delta_pieces.push_back(std::move(piece));
  }
  return out;
}

std::string surgery_to_json(const SurgeryPartition& part) {
  nlohmann::json j;
  j["host_atom_count"] = part.host_atom_count;
  j["sep"] = part.sep_atoms;
  j["boundary"] = part.boundary_atoms;
  auto pieces = nlohmann::json::array();
  for (const auto& piece : part.delta_pieces) {
    nlohmann::json e;
    auto coords = nlohmann::json::array();
    for (int i = 0; i < kMaxDim; ++i) coords.push_back(piece.q.coord[i]);
    e["q_level"] = piece.q.level;
    e["q_coord"] = coords;
    e["atoms"] = piece.atoms;
    e["piece_is_cube"] = piece.piece_is_cube;
    e["five_l_inside"] = piece.five_l_inside;
    pieces.push_back(e);
  }
  j["delta"] = pieces;
  return j.dump(2);
}

bool in_surgery_bad_region(const Point& x, int host_level,
                           const std::vector<const DyadicGrid*>& partner_grids,
                           const DyadicGrid& fourth, double theta, int sigma) {
  // partner cubes at comparable levels: sides within [2^{-sigma}, 2^{sigma}]
  // of the host side
  for (const DyadicGrid* g : partner_grids) {
    for (int l = host_level - sigma; l <= host_level + sigma; ++l) {
      if (l < g->k_min() || l > g->k_max()) continue;
      if (g->skeleton_distance(x, l) < theta * g->side(l)) return true;
    }
  }
  const int j = surgery_level_offset(theta);
  for (int l = host_level - j; l <= host_level - j + sigma; ++l) {
    if (l < fourth.k_min() || l > fourth.k_max()) continue;
    if (fourth.skeleton_distance(x, l) < theta * fourth.side(l)) return true;
  }
  return false;
}

}  // namespace bcz
