#include "bcz/suppression.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <unordered_map>

#include "bcz/maximal.hpp"

namespace bcz {

namespace {

// The sharp sweeps evaluate a many-cone profile at the same atom positions
// over and over; cache by coordinate bit pattern.
class CachedProfile {
 public:
  explicit CachedProfile(const LipschitzProfile& phi) : phi_(&phi) {}

  double operator()(const Point& p) const {
    uint64_t key = 0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(p.dim);
    for (int i = 0; i < p.dim; ++i) {
      uint64_t bits;
      std::memcpy(&bits, &p.x[i], sizeof(bits));
      key ^= bits + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2);
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = (*phi_)(p);
    cache_.emplace(key, v);
    return v;
  }

 private:
  const LipschitzProfile* phi_;
  mutable std::unordered_map<uint64_t, double> cache_;
};

BilinearKernel suppressed_kernel_cached(const BilinearKernel& base,
                                        const LipschitzProfile& phi) {
  const double m = base.params().m;
  const double beta = suppression_beta(m);
  auto cached = std::make_shared<CachedProfile>(phi);
  return BilinearKernel(
      base.params(),
      [base, cached, beta](const Point& x, const Point& y, const Point& z) {
        const double d = dist(x, y) + dist(x, z);
        const double prod = (*cached)(x) * (*cached)(y) * (*cached)(z);
        if (prod == 0.0) return base(x, y, z);
        const double d3b = std::pow(d, 3.0 * beta);
        return (d3b / (d3b + std::pow(prod, beta))) * base(x, y, z);
      },
      base.name() + "_suppressed");
}

}  // namespace

std::optional<double> epsilon_radius(const BilinearKernel& k,
                                     const AtomicMeasure& mu,
                                     const std::vector<cplx>& f0,
                                     const std::vector<cplx>& g0,
                                     const Point& x, double lambda0) {
  if (!(lambda0 > 0.0)) fail("epsilon_radius: lambda0 must be positive");
  const TruncationProfile prof =
      truncation_profile(k, mu.weighted(f0), mu.weighted(g0), x);
  // |T_eps| > lambda0 on [key[i-1], key[i]) pushes the sup to key[i]
  std::optional<double> out;
  for (size_t i = 0; i < prof.key.size(); ++i)
    if (std::abs(prof.value[i]) > lambda0) out = prof.key[i];
  return out;
}

SuppressionProfiles precompute_suppression(const SuppressionInstance& inst) {
  SuppressionProfiles out;
  const AtomicMeasure& mu = inst.mu;
  out.per_target.resize(inst.targets.size());
  for (size_t t = 0; t < inst.targets.size(); ++t) {
    const auto& tgt = inst.targets[t];
    const AtomicMeasure nu1 = mu.weighted(tgt.f0);
    const AtomicMeasure nu2 = mu.weighted(tgt.g0);
    out.per_target[t].reserve(mu.size());
    for (size_t a = 0; a < mu.size(); ++a)
      out.per_target[t].push_back(
          truncation_profile(tgt.kernel, nu1, nu2, mu.atom(a).p));
  }
  return out;
}

Phi0Result build_phi0(const SuppressionInstance& inst) {
  return build_phi0(inst, precompute_suppression(inst));
}

Phi0Result build_phi0(const SuppressionInstance& inst,
                      const SuppressionProfiles& profiles) {
  Phi0Result out;
  const AtomicMeasure& mu = inst.mu;
  const double total = mu.total_variation();

  std::vector<char> exceptional(mu.size(), 0);
  for (int i : inst.exceptional_atoms) exceptional[i] = 1;

  // per-target sharp values and suppression radii at the atoms
  std::vector<std::vector<double>> sharp(inst.targets.size());
  std::vector<std::vector<std::optional<double>>> radii(inst.targets.size());
  for (size_t t = 0; t < inst.targets.size(); ++t) {
    sharp[t].resize(mu.size());
    radii[t].resize(mu.size());
    for (size_t a = 0; a < mu.size(); ++a) {
      const TruncationProfile& prof = profiles.per_target[t][a];
      sharp[t][a] = prof.sup_above(0.0);
      std::optional<double> eps;
      for (size_t i = 0; i < prof.key.size(); ++i)
        if (std::abs(prof.value[i]) > inst.lambda0) eps = prof.key[i];
      radii[t][a] = eps;
    }
  }

  // weak-testing constant of the instance: sup_l l^s mu({T_sharp > l} \ H),
  // exact over the level-set breakpoints, normalized by mu(R^n)
  const double s = inst.weak_exponent_s;
  for (size_t t = 0; t < inst.targets.size(); ++t) {
    std::vector<double> vals;
    for (size_t a = 0; a < mu.size(); ++a)
      if (!exceptional[a]) vals.push_back(sharp[t][a]);
    std::vector<double> distinct = vals;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    for (double v : distinct) {
      if (v <= 0.0) continue;
      KahanSum mass;
      for (size_t a = 0; a < mu.size(); ++a)
        if (!exceptional[a] && sharp[t][a] >= v)
          mass.add(std::abs(mu.atom(a).w));
      out.measured_c0 =
          std::max(out.measured_c0, std::pow(v, s) * mass.value() / total);
    }
  }

  // cone envelope over the suppression balls B(x_i, eps(x_i))
  for (size_t t = 0; t < inst.targets.size(); ++t)
    for (size_t a = 0; a < mu.size(); ++a)
      if (radii[t][a]) out.phi0.add_cone(mu.atom(a).p, *radii[t][a]);

  KahanSum zero_mass, pos_mass, s_minus_h;
  for (size_t a = 0; a < mu.size(); ++a) {
    const double v = out.phi0(mu.atom(a).p);
    const double w = std::abs(mu.atom(a).w);
    if (v == 0.0) {
      zero_mass.add(w);
    } else {
      pos_mass.add(w);
      if (!exceptional[a]) s_minus_h.add(w);
      // {Phi0 > 0} subset of union of {T^t_sharp > lambda0/2}
      bool witnessed = false;
      for (size_t t = 0; t < inst.targets.size(); ++t)
        if (sharp[t][a] > inst.lambda0 / 2.0) witnessed = true;
      if (!witnessed) ++out.containment_violations;
    }
  }
  out.zero_set_mass_fraction = zero_mass.value() / total;
  out.suppressed_mass_fraction = pos_mass.value() / total;
  out.s_minus_h_mass = s_minus_h.value();
  out.s_mass_bound = std::pow(2.0, s) * out.measured_c0 *
                     std::pow(inst.lambda0, -s) * total;
  return out;
}

SuppressionVerification verify_suppression(const SuppressionInstance& inst,
                                           const LipschitzProfile& phi) {
  SuppressionVerification out;
  const Phi0Result base = build_phi0(inst);
  const AtomicMeasure& mu = inst.mu;
  for (size_t a = 0; a < mu.size(); ++a) {
    if (phi(mu.atom(a).p) < base.phi0(mu.atom(a).p)) {
      out.phi_dominates = false;
      out.witnesses.push_back(static_cast<int>(a));
    }
  }
  if (!out.phi_dominates) return out;
  for (const auto& tgt : inst.targets) {
    const BilinearKernel ksup = suppressed_kernel_cached(tgt.kernel, phi);
    const AtomicMeasure nu1 = mu.weighted(tgt.f0);
    const AtomicMeasure nu2 = mu.weighted(tgt.g0);
    for (size_t a = 0; a < mu.size(); ++a) {
      const double v =
          maximal_truncation_exact(ksup, nu1, nu2, mu.atom(a).p, 0.0).value;
      out.sup_suppressed_sharp = std::max(out.sup_suppressed_sharp, v);
    }
  }
  out.measured_c = std::max(0.0, out.sup_suppressed_sharp - inst.lambda0);
  return out;
}

double suppression_comparison_constant(const BilinearKernel& k,
                                       const AtomicMeasure& mu,
                                       const LipschitzProfile& phi,
                                       const std::vector<cplx>& f,
                                       const std::vector<cplx>& g) {
  const BilinearKernel ksup = suppressed_kernel_cached(k, phi);
  const AtomicMeasure nu1 = mu.weighted(f);
  const AtomicMeasure nu2 = mu.weighted(g);
  double worst = 0.0;
  for (size_t a = 0; a < mu.size(); ++a) {
    const Point& x = mu.atom(a).p;
    const double lhs = maximal_truncation_exact(ksup, nu1, nu2, x, 0.0).value;
    const double tail =
        maximal_truncation_exact(k, nu1, nu2, x, phi(x)).value;
    const double mm = centered_ball_maximal(mu, f, x, mu.resolution()) *
                      centered_ball_maximal(mu, g, x, mu.resolution());
    if (lhs <= tail) continue;
    if (mm == 0.0) fail("suppression comparison: zero maximal with excess");
    worst = std::max(worst, (lhs - tail) / mm);
  }
  return worst;
}

}  // namespace bcz
