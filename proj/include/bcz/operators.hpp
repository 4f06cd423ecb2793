#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bcz/kernel.hpp"
#include "bcz/measure.hpp"

namespace bcz {

enum class TruncMode { Max, Ball };

struct TruncationSpec {
  TruncMode mode = TruncMode::Max;
  double eps = 0.0;    // kept region: max(|x-y|,|x-z|) > eps (Max mode) or
                       // |x-y|^2 + |x-z|^2 > eps^2 (Ball mode); strict.
  double delta = 0.0;  // floor for maximal truncations
};

// T_eps(nu1, nu2)(x): exact double sum over kept atom pairs.  Pairs are summed
// in a canonical order (decreasing truncation key, then index) so grid values
// and the breakpoint sweep are bit-identical where they share an epsilon.
cplx apply_truncated(const BilinearKernel& k, const AtomicMeasure& nu1,
                     const AtomicMeasure& nu2, const Point& x,
                     const TruncationSpec& spec);

// Step function eps -> T_eps(nu1,nu2)(x) for the Max-mode truncation.
// value[i] is T_eps for eps in [key[i-1], key[i]) (key[-1] := 0); T_eps = 0
// for eps >= key.back().  Keys are the distinct pair keys max(|x-y|,|x-z|).
struct TruncationProfile {
  std::vector<double> key;
  std::vector<cplx> value;

  cplx at(double eps) const;                // T_eps
  double sup_above(double delta) const;     // T_{#,delta} = sup_{eps>delta} |T_eps|
  double arg_sup(double delta) const;       // breakpoint attaining the sup
};

TruncationProfile truncation_profile(const BilinearKernel& k,
                                     const AtomicMeasure& nu1,
                                     const AtomicMeasure& nu2, const Point& x);

struct MaximalTruncation {
  double value = 0.0;
  double arg_eps = 0.0;
  std::vector<double> breakpoints;
};

// T_{#,delta}(nu1,nu2)(x) via sorted suffix sums over the pair keys; exact.
MaximalTruncation maximal_truncation_exact(const BilinearKernel& k,
                                           const AtomicMeasure& nu1,
                                           const AtomicMeasure& nu2,
                                           const Point& x, double delta);

// Bucketed variant for large instances: sup of |T_eps| over a geometric
// eps-grid, never exceeding the exact sup.
double maximal_truncation_grid(const BilinearKernel& k,
                               const AtomicMeasure& nu1,
                               const AtomicMeasure& nu2, const Point& x,
                               double delta, const std::vector<double>& grid);

// <T_eps(f dmu, g dmu), h>_mu: exact triple sum.
cplx trilinear_form(const BilinearKernel& k, const AtomicMeasure& mu,
                    const std::vector<cplx>& f, const std::vector<cplx>& g,
                    const std::vector<cplx>& h, const TruncationSpec& spec);

// Region B in R^{2n} decidable exactly per atom pair.
struct PairPredicate {
  std::function<bool(const Point&, const Point&)> member;
  std::string description;

  static PairPredicate everything();
  static PairPredicate nothing();
  static PairPredicate product(std::function<bool(const Point&)> in_y,
                               std::function<bool(const Point&)> in_z);
  static PairPredicate complement(const PairPredicate& b);
  // {(y,z): max(dist(A,y), dist(A,z)) >= t diam(A)} — a subset of the
  // separation region used by the zero-average pairing bound.
  static PairPredicate min_separation(const Cube& a, double t);
};

// <T~(1_B f (x) g), h>_mu, untruncated (exact-diagonal pairs are skipped).
cplx pair_restricted_form(const BilinearKernel& k, const AtomicMeasure& mu,
                          const PairPredicate& b, const std::vector<cplx>& f,
                          const std::vector<cplx>& g,
                          const std::vector<cplx>& h);

struct TruncationComparison {
  double difference = 0.0;  // |T_eps(max) - T_eps(ball)|
  double bound = 0.0;       // M_m nu1(x) * M_m nu2(x)
  double ratio = 0.0;
};

// |T_eps - T~_eps| against the radial maximal product.
TruncationComparison compare_truncations(const BilinearKernel& k,
                                         const AtomicMeasure& nu1,
                                         const AtomicMeasure& nu2,
                                         const Point& x, double eps);

}  // namespace bcz
