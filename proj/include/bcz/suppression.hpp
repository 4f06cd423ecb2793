#pragma once

#include <optional>
#include <vector>

#include "bcz/kernel.hpp"
#include "bcz/measure.hpp"
#include "bcz/operators.hpp"

namespace bcz {

// One operator/pair combination subject to suppression: the maximal
// truncation of T(f0 dmu, g0 dmu) is tamed above level lambda0.
struct SuppressionTarget {
  BilinearKernel kernel;
  std::vector<cplx> f0;
  std::vector<cplx> g0;
};

struct SuppressionInstance {
  AtomicMeasure mu;
  std::vector<SuppressionTarget> targets;
  double lambda0 = 1.0;
  std::vector<int> exceptional_atoms;  // the set H
  double weak_exponent_s = 1.0;        // testing exponent
};

// eps(x) = sup{eps > 0 : |T_eps(f0,g0)(x)| > lambda0}, exact via the
// breakpoint step function; nullopt when x is not in S0.
std::optional<double> epsilon_radius(const BilinearKernel& k,
                                     const AtomicMeasure& mu,
                                     const std::vector<cplx>& f0,
                                     const std::vector<cplx>& g0,
                                     const Point& x, double lambda0);

struct Phi0Result {
  LipschitzProfile phi0;              // cone envelope over the suppression balls
  double zero_set_mass_fraction = 0;  // mu({Phi0 = 0}) / mu(R^n)
  double suppressed_mass_fraction = 0;
  // exact atomwise audit of {Phi0 > 0} subset of {T_sharp > lambda0/2},
  // per target
  int containment_violations = 0;
  // exact mass mu(S \ H) against the 2^s C0 lambda0^{-s} mu(R^n) formula
  double s_minus_h_mass = 0.0;
  double s_mass_bound = 0.0;
  double measured_c0 = 0.0;  // weak-testing constant of the instance
};

// Per-target truncation profiles at the atoms; independent of lambda0, so a
// lambda0 scan reuses one sweep.
struct SuppressionProfiles {
  std::vector<std::vector<TruncationProfile>> per_target;
};

SuppressionProfiles precompute_suppression(const SuppressionInstance& inst);

Phi0Result build_phi0(const SuppressionInstance& inst);
Phi0Result build_phi0(const SuppressionInstance& inst,
                      const SuppressionProfiles& profiles);

struct SuppressionVerification {
  bool phi_dominates = true;        // Phi >= Phi0 on the atoms
  std::vector<int> witnesses;       // atoms violating the domination
  double sup_suppressed_sharp = 0;  // max over atoms of T_{mu,Phi,sharp}
  double measured_c = 0;            // sup - lambda0, clamped at 0
};

// Measures sup_x T_{mu,Phi,sharp}(f0,g0)(x) for Phi >= Phi0 over all targets.
SuppressionVerification verify_suppression(const SuppressionInstance& inst,
                                           const LipschitzProfile& phi);

// Pointwise comparison T_{mu,Phi,sharp}(f,g)(x) against
// T_{mu,sharp,Phi(x)}(f,g)(x) + C M_mu f(x) M_mu g(x): returns the measured C
// at the worst atom.
double suppression_comparison_constant(const BilinearKernel& k,
                                       const AtomicMeasure& mu,
                                       const LipschitzProfile& phi,
                                       const std::vector<cplx>& f,
                                       const std::vector<cplx>& g);

}  // namespace bcz
