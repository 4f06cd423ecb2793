#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcz/boxset.hpp"
#include "bcz/measure.hpp"

namespace bcz {

// Non-homogeneous CZ decomposition of a complex measure nu at level lambda
// against the reference measure mu: nu = f dmu off the cubes + sum of
// supported, mean-zero bad parts beta_i on doubling hosts R_i.
struct CZDecomposition {
  double lambda = 0.0;
  std::vector<Cube> cubes;              // Q_i, bounded overlap
  std::vector<Cube> hosts;              // R_i = smallest (6,6^{m+1})-doubling 6^k Q_i
  std::vector<cplx> alpha;              // phi_i = alpha_i 1_{R_i}
  std::vector<cplx> w_integral;         // int w_i dnu
  std::vector<int> atom_cover_count;    // per nu-atom: #cubes containing it
  std::vector<cplx> good_f;             // f on atoms (dnu/dmu off the cubes)
};

// Exact re-check of every postcondition, from the raw inputs.
struct CZVerification {
  bool cd1 = false;  // |nu|(Q_i) > lambda 2^{-(n+1)} mu(2Q_i)
  bool cd2 = false;  // |nu|(eta Q_i) <= lambda 2^{-(n+1)} mu(2 eta Q_i), eta > 2
  bool cd3 = false;  // nu = f dmu off the union with |f| <= lambda
  bool cd4 = false;  // spt phi_i in R_i (structural for phi_i = alpha_i 1_{R_i})
  bool cd5 = false;  // int phi_i dmu = int w_i dnu
  bool cd6 = false;  // sum |phi_i| <= B lambda, B measured below
  bool cd7 = false;  // ||phi_i||_inf mu(R_i) <= 2 |nu|(Q_i)
  bool beta_zero_mass = false;  // beta_i(R_i) = 0 exactly
  int max_overlap = 0;
  double measured_B = 0.0;
  double worst_cd5_error = 0.0;
  double worst_beta_mass = 0.0;
  double doubling_tail_constant = 0.0;  // max_i int_{R_i \ Q_i} dmu/|x-c|^m
  bool all(int overlap_ceiling, double b_ceiling) const {
    return cd1 && cd2 && cd3 && cd4 && cd5 && cd6 && cd7 && beta_zero_mass &&
           max_overlap <= overlap_ceiling && measured_B <= b_ceiling;
  }
};

CZDecomposition cz_decompose(const AtomicMeasure& nu, const AtomicMeasure& mu,
                             double lambda, double m);

CZVerification cz_verify(const CZDecomposition& d, const AtomicMeasure& nu,
                         const AtomicMeasure& mu, double m);

std::string cz_to_json(const CZDecomposition& d);

// Whitney covering of an open box-union with the non-doubling refinement.
struct WhitneyCover {
  double R = 21.0;         // RQ_i meets the complement
  std::vector<Cube> cubes;         // Q_i: maximal dyadic with 10Q_i inside
  std::vector<Cube> refined;       // Q_j tilde in [Q_j, 1.1 Q_j]
  std::vector<int> refined_index;  // which Q_i each refined cube came from
  int d0 = 0;                      // realized overlap bound of the 10Q_i
};

struct WhitneyVerification {
  bool ten_q_inside = false;
  bool r_q_meets_complement = false;
  bool comparable_neighbors = false;  // overlapping 10Q_i have sides within 64x
  bool refined_doubling_small_boundary = false;  // (9,2D0)-doubling, t-small
  bool refined_disjoint = false;
  bool refined_mass = false;  // sum mu(refined) >= mu(Omega) / (8 D0)
  bool atoms_covered = false;  // every atom of Omega inside some Q_i
  int max_overlap = 0;
  double mass_fraction = 0.0;
  double worst_side_ratio = 1.0;  // realized comparability constant
  bool all() const {
    return ten_q_inside && r_q_meets_complement && comparable_neighbors &&
           refined_doubling_small_boundary && refined_disjoint &&
           refined_mass && atoms_covered;
  }
};

WhitneyCover whitney(const BoxUnion& omega, const AtomicMeasure& mu, double t,
                     int max_depth = 40);

WhitneyVerification whitney_verify(const WhitneyCover& cover,
                                   const BoxUnion& omega,
                                   const AtomicMeasure& mu, double t);

std::string whitney_to_json(const WhitneyCover& c);

}  // namespace bcz
