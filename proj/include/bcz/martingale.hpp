#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "bcz/dyadic.hpp"
#include "bcz/measure.hpp"

namespace bcz {

// D0(w) relative to a testbed cube Q0 with boundary parameter lambda0:
// all grid cubes Q inside Q0 with l(Q) <= 2^{u0}, 2^{u0} < lambda0 l(Q0)/4 <=
// 2^{u0+1}, materialized down to the level where atoms separate.  Zero-weight
// atoms are dropped up front; they cannot affect any mu-integral.
class Testbed {
 public:
  struct Node {
    CubeRef ref;
    Cube geom;
    int parent = -1;            // -1 for top-scale cubes
    std::vector<int> children;  // empty for single-atom leaves
    std::vector<int> atoms;     // indices into mu.atoms()
    double mass = 0.0;          // mu(Q)
  };

  Testbed(const AtomicMeasure& mu, const Cube& q0, double lambda0,
          uint64_t grid_seed);

  const AtomicMeasure& mu() const { return *mu_; }
  const DyadicGrid& grid() const { return grid_; }
  const Cube& q0() const { return q0_; }
  double lambda0() const { return lambda0_; }
  int u0() const { return u0_; }
  int top_level() const { return -u0_; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[i]; }
  size_t node_count() const { return nodes_.size(); }
  const std::vector<int>& top_nodes() const { return tops_; }

  // atoms of Q0 \ Q0_boundary covered by the top-scale cubes
  const std::vector<int>& covered_atoms() const { return covered_; }
  // atoms of the measure left outside every top-scale cube of D0
  const std::vector<int>& uncovered_atoms() const { return uncovered_; }

  double mass_of(int node) const { return nodes_[node].mass; }

 private:
  void build();

  const AtomicMeasure* mu_;
  Cube q0_;
  double lambda0_;
  int u0_;
  DyadicGrid grid_;
  std::vector<Node> nodes_;
  std::vector<int> tops_;
  std::vector<int> covered_;
  std::vector<int> uncovered_;
};

// Accretive function b on the atoms: |<b>_Q| >= c_b over every cube of the
// active window, validated eagerly at construction (violations are errors).
class AccretiveSystem {
 public:
  AccretiveSystem(const Testbed& bed, std::vector<cplx> b, double c_b);

  const Testbed& bed() const { return *bed_; }
  const std::vector<cplx>& b() const { return b_; }
  double c_b() const { return c_b_; }
  double sup_norm() const { return sup_norm_; }

  cplx avg_f(int node, const std::vector<cplx>& f) const;  // <f>_Q
  cplx avg_b(int node) const;                              // <b>_Q
  cplx e_op(int node, const std::vector<cplx>& f) const;   // E_Q f = <f>_Q/<b>_Q
  cplx d_op(int node, const std::vector<cplx>& f) const;   // D_Q f
  // Delta_Q f and its adjoint, as dense atom functions (zero off Q)
  std::vector<cplx> delta(int node, const std::vector<cplx>& f) const;
  std::vector<cplx> delta_adj(int node, const std::vector<cplx>& f) const;

  std::vector<cplx> reconstruct(const std::vector<cplx>& f) const;
  // f - (reconstruction + untouched uncovered atoms): nonzero entries witness
  // support leaking outside the D0 coverage
  std::vector<cplx> reconstruction_remainder(const std::vector<cplx>& f) const;

  // S f = (sum_{l(Q) < 2^{u0}} |D_Q f|^2 1_Q)^{1/2},
  // S* f = (sum_{Q in D0} |Delta*_Q f|^2)^{1/2}
  std::vector<double> square_function(const std::vector<cplx>& f) const;
  std::vector<double> square_function_adj(const std::vector<cplx>& f) const;

 private:
  const Testbed* bed_;
  std::vector<cplx> b_;
  double c_b_;
  double sup_norm_ = 0.0;
  std::vector<cplx> avg_b_;  // per node
};

// Goodness filter for projections: a cube passes when it is good with respect
// to every listed grid.  Indeterminate cubes count as good (lenient) or bad
// (strict) per the flag.
struct GoodnessFilter {
  std::vector<const DyadicGrid*> others;
  GoodnessParams params;
  bool indeterminate_counts_good = true;

  bool passes(const Cube& geom, int level, int* indeterminate_seen) const;
};

std::vector<cplx> project_good(const AccretiveSystem& sys,
                               const std::vector<cplx>& f,
                               const GoodnessFilter& filter,
                               int* indeterminate_count = nullptr);
std::vector<cplx> project_bad(const AccretiveSystem& sys,
                              const std::vector<cplx>& f,
                              const GoodnessFilter& filter,
                              int* indeterminate_count = nullptr);

struct PrincipalCubes {
  std::vector<int> family;          // node ids, a Carleson family
  std::vector<int> parent_in_family;  // pi_S for each node of the testbed
  double worst_ratio = 0.0;   // max over nodes of <|phi|>_Q / <|phi|>_{pi Q}
  double packing_constant = 0.0;  // max over S of sum_{S' subset S} mu(S')/mu(S)
};

// Stopping family with threshold 2<|phi|>_S, starting from the top-scale cubes.
PrincipalCubes principal_cubes(const Testbed& bed, const std::vector<cplx>& phi);

// M_{mu,D} f at an atom: sup over the testbed cubes containing it of <|f|>_Q.
double dyadic_maximal(const Testbed& bed, const std::vector<cplx>& f, int atom);

// L^p(mu) norm of an atom function
double lp_norm(const AtomicMeasure& mu, const std::vector<cplx>& f, double p);
double lp_norm(const AtomicMeasure& mu, const std::vector<double>& f, double p);

}  // namespace bcz
