#include "bcz/operators.hpp"

#include <algorithm>
#include <cmath>

#include "bcz/maximal.hpp"

namespace bcz {

namespace {

struct PairTerm {
  double key;  // truncation key for the active mode
  uint32_t j, kdx;
  cplx contrib;
};

// All off-diagonal pair contributions with their truncation keys, sorted by
// decreasing key (ties by index).  The canonical summation order.
std::vector<PairTerm> pair_terms(const BilinearKernel& k,
                                 const AtomicMeasure& nu1,
                                 const AtomicMeasure& nu2, const Point& x,
                                 TruncMode mode) {
  std::vector<PairTerm> terms;
  terms.reserve(nu1.size() * nu2.size());
  for (uint32_t j = 0; j < nu1.size(); ++j) {
    const auto& ay = nu1.atom(j);
    const double dy = dist(x, ay.p);
    for (uint32_t l = 0; l < nu2.size(); ++l) {
      const auto& az = nu2.atom(l);
      const double dz = dist(x, az.p);
      if (dy + dz == 0.0) continue;  // full diagonal: kernel domain excludes it
      const double key = mode == TruncMode::Max ? std::max(dy, dz)
                                                : std::sqrt(dy * dy + dz * dz);
      terms.push_back({key, j, l, k(x, ay.p, az.p) * ay.w * az.w});
    }
  }
  std::sort(terms.begin(), terms.end(), [](const PairTerm& a, const PairTerm& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.j != b.j) return a.j < b.j;
    return a.kdx < b.kdx;
  });
  return terms;
}

}  // namespace

cplx apply_truncated(const BilinearKernel& k, const AtomicMeasure& nu1,
                     const AtomicMeasure& nu2, const Point& x,
                     const TruncationSpec& spec) {
  if (spec.mode == TruncMode::Max)
    return truncation_profile(k, nu1, nu2, x).at(spec.eps);
  const auto terms = pair_terms(k, nu1, nu2, x, spec.mode);
  KahanSumC acc;
  for (const auto& t : terms) {
    if (t.key <= spec.eps) break;  // sorted descending: the rest are cut
    acc.add(t.contrib);
  }
  return acc.value();
}

cplx TruncationProfile::at(double eps) const {
  // value on [key[i-1], key[i]) keeps pairs with key > eps
  for (size_t i = 0; i < key.size(); ++i)
    if (eps < key[i]) return value[i];
  return cplx(0.0, 0.0);
}

double TruncationProfile::sup_above(double delta) const {
  double best = 0.0;
  for (size_t i = 0; i < key.size(); ++i)
    if (key[i] > delta) best = std::max(best, std::abs(value[i]));
  return best;
}

double TruncationProfile::arg_sup(double delta) const {
  double best = 0.0, arg = 0.0;
  for (size_t i = 0; i < key.size(); ++i)
    if (key[i] > delta && std::abs(value[i]) >= best) {
      best = std::abs(value[i]);
      arg = key[i];
    }
  return arg;
}

TruncationProfile truncation_profile(const BilinearKernel& k,
                                     const AtomicMeasure& nu1,
                                     const AtomicMeasure& nu2, const Point& x) {
  TruncationProfile prof;
  const size_t n1 = nu1.size(), n2 = nu2.size();
  if (n1 == 0 || n2 == 0) return prof;

  // Max-mode pair keys live in the union of the two distance sets, so rank
  // bucketing avoids a comparison sort over the pairs.  Buckets are walked
  // from the largest key down with terms in (j,l) order inside each bucket:
  // the same canonical sequence the sorted sweep would produce, so shared
  // epsilons stay bit-identical across code paths.
  std::vector<double> dy(n1), dz(n2);
  for (size_t j = 0; j < n1; ++j) dy[j] = dist(x, nu1.atom(j).p);
  for (size_t l = 0; l < n2; ++l) dz[l] = dist(x, nu2.atom(l).p);
  std::vector<double> keys = dy;
  keys.insert(keys.end(), dz.begin(), dz.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto rank = [&](double d) {
    return static_cast<size_t>(
        std::lower_bound(keys.begin(), keys.end(), d) - keys.begin());
  };
  std::vector<size_t> ry(n1), rz(n2);
  for (size_t j = 0; j < n1; ++j) ry[j] = rank(dy[j]);
  for (size_t l = 0; l < n2; ++l) rz[l] = rank(dz[l]);

  std::vector<std::vector<cplx>> bucket(keys.size());
  for (size_t j = 0; j < n1; ++j) {
    const auto& ay = nu1.atom(j);
    for (size_t l = 0; l < n2; ++l) {
      if (dy[j] + dz[l] == 0.0) continue;
      bucket[std::max(ry[j], rz[l])].push_back(k(x, ay.p, nu2.atom(l).p) *
                                               ay.w * nu2.atom(l).w);
    }
  }

  std::vector<double> keys_desc;
  std::vector<cplx> vals_desc;
  KahanSumC acc;
  for (size_t r = keys.size(); r-- > 0;) {
    if (bucket[r].empty()) continue;  // not realized as a pair key
    for (const cplx& c : bucket[r]) acc.add(c);
    keys_desc.push_back(keys[r]);
    vals_desc.push_back(acc.value());
  }
  prof.key.assign(keys_desc.rbegin(), keys_desc.rend());
  prof.value.assign(vals_desc.rbegin(), vals_desc.rend());
  return prof;
}

MaximalTruncation maximal_truncation_exact(const BilinearKernel& k,
                                           const AtomicMeasure& nu1,
                                           const AtomicMeasure& nu2,
                                           const Point& x, double delta) {
  const TruncationProfile prof = truncation_profile(k, nu1, nu2, x);
  MaximalTruncation out;
  out.breakpoints = prof.key;
  out.value = prof.sup_above(delta);
  out.arg_eps = prof.arg_sup(delta);
  return out;
}

double maximal_truncation_grid(const BilinearKernel& k,
                               const AtomicMeasure& nu1,
                               const AtomicMeasure& nu2, const Point& x,
                               double delta, const std::vector<double>& grid) {
  // Bucket pair contributions by the first grid point at or above their key,
  // order each bucket canonically, and accumulate buckets from the top.  The
  // running sum at each grid boundary replays exactly the operation sequence
  // of the sorted suffix sweep, so shared epsilons are bit-identical; coarse
  // grids can only miss suprema, never exceed them.
  std::vector<double> eps = grid;
  std::sort(eps.begin(), eps.end());
  std::vector<std::vector<PairTerm>> bucket(eps.size() + 1);
  for (uint32_t j = 0; j < nu1.size(); ++j) {
    const auto& ay = nu1.atom(j);
    const double dy = dist(x, ay.p);
    for (uint32_t l = 0; l < nu2.size(); ++l) {
      const auto& az = nu2.atom(l);
      const double dz = dist(x, az.p);
      if (dy + dz == 0.0) continue;
      const double key = std::max(dy, dz);
      const size_t idx =
          std::lower_bound(eps.begin(), eps.end(), key) - eps.begin();
      bucket[idx].push_back({key, j, l, k(x, ay.p, az.p) * ay.w * az.w});
    }
  }
  for (auto& b : bucket)
    std::sort(b.begin(), b.end(), [](const PairTerm& a, const PairTerm& c) {
      if (a.key != c.key) return a.key > c.key;
      if (a.j != c.j) return a.j < c.j;
      return a.kdx < c.kdx;
    });
  double best = 0.0;
  KahanSumC run;
  for (size_t i = eps.size(); i-- > 0;) {
    for (const auto& t : bucket[i + 1]) run.add(t.contrib);
    // right-continuity: T at eps[i] equals T just above it, so the value at
    // eps[i] == delta is still attained inside (delta, infinity)
    if (eps[i] >= delta) best = std::max(best, std::abs(run.value()));
  }
  return best;
}

cplx trilinear_form(const BilinearKernel& k, const AtomicMeasure& mu,
                    const std::vector<cplx>& f, const std::vector<cplx>& g,
                    const std::vector<cplx>& h, const TruncationSpec& spec) {
  // plain atom-order double sum per query point; deterministic without the
  // canonical sort (only the breakpoint machinery needs that)
  KahanSumC acc;
  std::vector<double> dz(mu.size());
  for (size_t i = 0; i < mu.size(); ++i) {
    const auto& ax = mu.atom(i);
    const cplx hw = h[i] * ax.w;
    if (hw == cplx(0.0, 0.0)) continue;
    for (size_t l = 0; l < mu.size(); ++l) dz[l] = dist(ax.p, mu.atom(l).p);
    KahanSumC inner;
    for (size_t j = 0; j < mu.size(); ++j) {
      const auto& ay = mu.atom(j);
      const cplx fw = f[j] * ay.w;
      if (fw == cplx(0.0, 0.0)) continue;
      const double dy = dz[j];
      for (size_t l = 0; l < mu.size(); ++l) {
        const auto& az = mu.atom(l);
        const cplx gw = g[l] * az.w;
        if (gw == cplx(0.0, 0.0)) continue;
        if (dy + dz[l] == 0.0) continue;
        const double key = spec.mode == TruncMode::Max
                               ? std::max(dy, dz[l])
                               : std::sqrt(dy * dy + dz[l] * dz[l]);
        if (key <= spec.eps) continue;
        inner.add(k(ax.p, ay.p, az.p) * fw * gw);
      }
    }
    acc.add(hw * inner.value());
  }
  return acc.value();
}

PairPredicate PairPredicate::everything() {
  return {[](const Point&, const Point&) { return true; }, "everything"};
}

PairPredicate PairPredicate::nothing() {
  return {[](const Point&, const Point&) { return false; }, "nothing"};
}

PairPredicate PairPredicate::product(std::function<bool(const Point&)> in_y,
                                     std::function<bool(const Point&)> in_z) {
  return {[in_y = std::move(in_y), in_z = std::move(in_z)](
              const Point& y, const Point& z) { return in_y(y) && in_z(z); },
          "product"};
}

PairPredicate PairPredicate::complement(const PairPredicate& b) {
  return {[m = b.member](const Point& y, const Point& z) { return !m(y, z); },
          "complement(" + b.description + ")"};
}

PairPredicate PairPredicate::min_separation(const Cube& a, double t) {
  const double cut = t * a.side() * std::sqrt(static_cast<double>(a.dim()));
  return {[a, cut](const Point& y, const Point& z) {
            return std::max(a.dist_to(y), a.dist_to(z)) >= cut;
          },
          "min_separation"};
}

cplx pair_restricted_form(const BilinearKernel& k, const AtomicMeasure& mu,
                          const PairPredicate& b, const std::vector<cplx>& f,
                          const std::vector<cplx>& g,
                          const std::vector<cplx>& h) {
  KahanSumC acc;
  for (size_t i = 0; i < mu.size(); ++i) {
    const auto& ax = mu.atom(i);
    const cplx hw = h[i] * ax.w;
    if (hw == cplx(0.0, 0.0)) continue;
    KahanSumC inner;
    for (size_t j = 0; j < mu.size(); ++j) {
      const auto& ay = mu.atom(j);
      const double dy = dist(ax.p, ay.p);
      for (size_t l = 0; l < mu.size(); ++l) {
        const auto& az = mu.atom(l);
        if (dy + dist(ax.p, az.p) == 0.0) continue;
        if (!b.member(ay.p, az.p)) continue;
        inner.add(k(ax.p, ay.p, az.p) * f[j] * ay.w * g[l] * az.w);
      }
    }
    acc.add(hw * inner.value());
  }
  return acc.value();
}

TruncationComparison compare_truncations(const BilinearKernel& k,
                                         const AtomicMeasure& nu1,
                                         const AtomicMeasure& nu2,
                                         const Point& x, double eps) {
  TruncationComparison out;
  TruncationSpec smax{TruncMode::Max, eps, 0.0};
  TruncationSpec sball{TruncMode::Ball, eps, 0.0};
  out.difference = std::abs(apply_truncated(k, nu1, nu2, x, smax) -
                            apply_truncated(k, nu1, nu2, x, sball));
  const double m = k.params().m;
  out.bound = radial_maximal_measure(nu1, x, m, nu1.resolution()) *
              radial_maximal_measure(nu2, x, m, nu2.resolution());
  out.ratio = out.difference == 0.0 ? 0.0 : out.difference / out.bound;
  return out;
}

}  // namespace bcz
