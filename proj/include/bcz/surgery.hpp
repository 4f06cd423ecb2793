#pragma once

#include <optional>
#include <vector>

#include "bcz/dyadic.hpp"
#include "bcz/measure.hpp"

namespace bcz {

// j(theta): the integer with 2^{-21} theta <= 2^{j} < 2^{-20} theta.
int surgery_level_offset(double theta);

// theta-surgery of a host cube against one or two cubes from other grids,
// refereed by an auxiliary grid of cubes Q with l(Q) = 2^{j(theta)} l(K).
// Every atom of the host lands in exactly one of {sep, boundary, delta}.
struct SurgeryPartition {
  std::vector<int> sep_atoms;       // indices into mu.atoms()
  std::vector<int> boundary_atoms;
  struct DeltaPiece {
    CubeRef q;            // auxiliary-grid cube owning the piece
    Cube inner;           // closed inner cube {x in Q : d(x,dQ) >= theta l(Q)}
                          // (pair mode: the small-boundary cube S_Q)
    std::vector<int> atoms;
    bool piece_is_cube = false;   // inner cube inside the full intersection
    bool five_l_inside = false;   // 5 * inner inside the full intersection
  };
  std::vector<DeltaPiece> delta_pieces;
  int host_atom_count = 0;
};

// Triple mode: partition of I against (J, K); l(K) <= l(I) <= l(J) expected.
SurgeryPartition surgery_triple(const AtomicMeasure& mu, const Cube& host_i,
                                const Cube& j_cube, const Cube& k_cube,
                                double theta, const DyadicGrid& fourth,
                                int k_level);

// Pair mode: partition of I against K; the delta pieces are small-boundary
// cubes S_Q with (1-theta) Q in S_Q in (1-theta/2) Q, found by a breakpoint
// scan.  Scan failures surface in failed_small_boundary.
struct PairSurgeryResult {
  SurgeryPartition partition;
  std::vector<CubeRef> failed_small_boundary;
};

PairSurgeryResult surgery_pair(const AtomicMeasure& mu, const Cube& host_i,
                               const Cube& k_cube, double theta,
                               const DyadicGrid& fourth, int k_level,
                               double t_small, int scan_points = 48);

// Membership in the host-only bad region I_bad that contains the boundary
// part for every choice of the partner cubes: within theta l of the skeleton
// of the partner grids at comparable levels, or of the auxiliary grid at the
// surgery scale.  host_level is the dyadic level of I.
bool in_surgery_bad_region(const Point& x, int host_level,
                           const std::vector<const DyadicGrid*>& partner_grids,
                           const DyadicGrid& fourth, double theta, int sigma);

// atom-index lists per piece
std::string surgery_to_json(const SurgeryPartition& part);

}  // namespace bcz
