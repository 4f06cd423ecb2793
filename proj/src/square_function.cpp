#include "bcz/square_function.hpp"

#include <algorithm>
#include <cmath>

namespace bcz {

SquareKernelFamily shipped_square_family(double m, double alpha) {
  return SquareKernelFamily(
      KernelParams{m, alpha, 1.0},
      [m, alpha](double t, const Point& x, const Point& y,
                 const Point& z) -> cplx {
        const double ma = m + alpha;
        return cplx(std::pow(t, 2.0 * alpha) /
                        (std::pow(t + dist(x, y), ma) *
                         std::pow(t + dist(x, z), ma)),
                    0.0);
      },
      "shipped_sq");
}

cplx theta_t(const SquareKernelFamily& fam, const AtomicMeasure& nu1,
             const AtomicMeasure& nu2, const Point& x, double t) {
  if (!(t > 0.0)) fail("theta_t: t must be positive");
  KahanSumC acc;
  for (const auto& ay : nu1.atoms())
    for (const auto& az : nu2.atoms())
      acc.add(fam(t, x, ay.p, az.p) * ay.w * az.w);
  return acc.value();
}

std::vector<double> ScaleQuadrature::nodes() const {
  if (!(t_min > 0.0) || !(t_max > t_min)) fail("ScaleQuadrature: bad bounds");
  if (per_octave < 4) fail("ScaleQuadrature: need at least 4 nodes per octave");
  std::vector<double> out;
  const double h = log_step();
  const double log_lo = std::log(t_min);
  const double log_hi = std::log(t_max);
  const int n = static_cast<int>(std::ceil((log_hi - log_lo) / h));
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(log_lo + (i + 0.5) * h));
  return out;
}

double bv(const SquareKernelFamily& fam, const AtomicMeasure& nu1,
          const AtomicMeasure& nu2, const Point& x, const ScaleQuadrature& quad,
          double cutoff) {
  KahanSum acc;
  const double h = quad.log_step();
  for (double t : quad.nodes()) {
    if (t > cutoff) break;
    acc.add(std::norm(theta_t(fam, nu1, nu2, x, t)) * h);
  }
  return std::sqrt(acc.value());
}

double bv_tail_fraction(const SquareKernelFamily& fam, const AtomicMeasure& nu1,
                        const AtomicMeasure& nu2, const Point& x,
                        const ScaleQuadrature& quad) {
  const double h = quad.log_step();
  const double tail_from = quad.t_max / 2.0;
  KahanSum total, tail;
  for (double t : quad.nodes()) {
    const double contrib = std::norm(theta_t(fam, nu1, nu2, x, t)) * h;
    total.add(contrib);
    if (t >= tail_from) tail.add(contrib);
  }
  return total.value() > 0.0 ? tail.value() / total.value() : 0.0;
}

namespace {

Point rnd_point(Rng& rng, int dim, double box) {
  Point p = Point::zero(dim);
  for (int i = 0; i < dim; ++i) p.x[i] = rng.uniform(-box, box);
  return p;
}

Point rnd_offset(Rng& rng, const Point& base, double length) {
  Point dir = Point::zero(base.dim);
  double norm = 0.0;
  while (norm == 0.0) {
    for (int i = 0; i < base.dim; ++i) dir.x[i] = rng.uniform(-1.0, 1.0);
    norm = dist(dir, Point::zero(base.dim));
  }
  Point out = base;
  for (int i = 0; i < base.dim; ++i) out.x[i] += length * dir.x[i] / norm;
  return out;
}

}  // namespace

SquareKernelReport verify_sq_kernel(const SquareKernelFamily& fam,
                                    const KernelSamplerConfig& cfg) {
  SquareKernelReport rep;
  Rng rng(cfg.seed);
  const double m = fam.params().m;
  const double alpha = fam.params().alpha;
  const double log_lo = std::log(cfg.scale_min);
  const double log_hi = std::log(cfg.scale_max);
  for (int s = 0; s < cfg.strata; ++s) {
    const double t =
        std::exp(log_lo + (log_hi - log_lo) * (s + 0.5) / cfg.strata);
    for (int i = 0; i < cfg.samples_per_stratum; ++i) {
      const Point x = rnd_point(rng, cfg.dim, cfg.scale_max);
      const Point y = rnd_offset(rng, x, t * rng.uniform(0.1, 4.0));
      const Point z = rnd_offset(rng, x, t * rng.uniform(0.1, 4.0));
      const double denom = std::pow(t, 2.0 * alpha) /
                           (std::pow(t + dist(x, y), m + alpha) *
                            std::pow(t + dist(x, z), m + alpha));
      rep.size_ratio =
          std::max(rep.size_ratio, std::abs(fam(t, x, y, z)) / denom);

      const double move = (t / 2.0) * rng.uniform(0.05, 0.999);
      const double hden = std::pow(t, alpha) * std::pow(move, alpha) /
                          (std::pow(t + dist(x, y), m + alpha) *
                           std::pow(t + dist(x, z), m + alpha));
      const Point xm = rnd_offset(rng, x, move);
      rep.x_hoelder_ratio =
          std::max(rep.x_hoelder_ratio,
                   std::abs(fam(t, x, y, z) - fam(t, xm, y, z)) / hden);
      const Point ym = rnd_offset(rng, y, move);
      rep.y_hoelder_ratio =
          std::max(rep.y_hoelder_ratio,
                   std::abs(fam(t, x, y, z) - fam(t, x, ym, z)) / hden);
      const Point zm = rnd_offset(rng, z, move);
      rep.z_hoelder_ratio =
          std::max(rep.z_hoelder_ratio,
                   std::abs(fam(t, x, y, z) - fam(t, x, y, zm)) / hden);
    }
  }
  return rep;
}

double t1_testing_statistic(const SquareKernelFamily& fam,
                            const AtomicMeasure& mu, const Cube& q,
                            const std::vector<char>& in_h, double exponent_l,
                            const ScaleQuadrature& quad) {
  const double mass_q = std::abs(mu.mass_cube(q));
  if (mass_q == 0.0) return 0.0;
  std::vector<cplx> one_q(mu.size(), cplx(0.0, 0.0));
  for (size_t i = 0; i < mu.size(); ++i)
    if (q.contains(mu.atom(i).p)) one_q[i] = 1.0;
  const AtomicMeasure nu = mu.weighted(one_q);

  std::vector<std::pair<double, double>> vw;  // (BV value, atom weight)
  for (size_t i = 0; i < mu.size(); ++i) {
    if (!q.contains(mu.atom(i).p) || in_h[i]) continue;
    vw.emplace_back(bv(fam, nu, nu, mu.atom(i).p, quad, q.side()),
                    std::abs(mu.atom(i).w));
  }
  if (vw.empty()) return 0.0;

  // sup_l l^p mu({BV > l}) is approached as l rises to each distinct value v,
  // where the level set is {BV >= v}
  std::vector<double> distinct;
  for (const auto& [v, w] : vw) distinct.push_back(v);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  double best = 0.0;
  for (double v : distinct) {
    if (v <= 0.0) continue;
    KahanSum mass;
    for (const auto& [val, w] : vw)
      if (val >= v) mass.add(w);
    best = std::max(best, std::pow(v, exponent_l) * mass.value() / mass_q);
  }
  return best;
}

}  // namespace bcz
