#include "bcz/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace bcz {

namespace {

// Cumulative profile along sorted distances from a fixed centre: after each
// distinct distance d we know the totals over {atoms with dist <= d}.
struct SweepEntry {
  double d;
  double a;  // cumulated primary mass (|f| dmu or |nu|)
  double b;  // cumulated secondary mass (mu, or second factor)
};

struct Jump {
  double d;
  double a;
  double b;
};

std::vector<SweepEntry> cumulate(std::vector<Jump> jumps) {
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& p, const Jump& q) { return p.d < q.d; });
  std::vector<SweepEntry> out;
  KahanSum ra, rb;
  for (size_t i = 0; i < jumps.size(); ++i) {
    ra.add(jumps[i].a);
    rb.add(jumps[i].b);
    if (i + 1 == jumps.size() || jumps[i + 1].d != jumps[i].d)
      out.push_back({jumps[i].d, ra.value(), rb.value()});
  }
  return out;
}

}  // namespace

double radial_maximal_measure(const AtomicMeasure& nu, const Point& x, double m,
                              double r_min) {
  std::vector<Jump> jumps;
  for (const auto& a : nu.atoms()) jumps.push_back({dist(x, a.p), std::abs(a.w), 0});
  double best = 0.0;
  for (const auto& e : cumulate(std::move(jumps)))
    best = std::max(best, e.a / std::pow(std::max(e.d, r_min), m));
  return best;
}

double radial_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                      const Point& x, double m, double r_min) {
  std::vector<Jump> jumps;
  for (size_t i = 0; i < mu.size(); ++i)
    jumps.push_back(
        {dist(x, mu.atom(i).p), std::abs(f[i]) * std::abs(mu.atom(i).w), 0});
  double best = 0.0;
  for (const auto& e : cumulate(std::move(jumps)))
    best = std::max(best, e.a / std::pow(std::max(e.d, r_min), m));
  return best;
}

double bilinear_radial_maximal(const AtomicMeasure& nu1,
                               const AtomicMeasure& nu2, const Point& x,
                               double m, double r_min) {
  std::vector<Jump> jumps;
  for (const auto& a : nu1.atoms()) jumps.push_back({dist(x, a.p), std::abs(a.w), 0});
  for (const auto& a : nu2.atoms()) jumps.push_back({dist(x, a.p), 0, std::abs(a.w)});
  double best = 0.0;
  for (const auto& e : cumulate(std::move(jumps))) {
    const double r = std::pow(std::max(e.d, r_min), m);
    best = std::max(best, (e.a / r) * (e.b / r));
  }
  return best;
}

namespace {

// sup over r >= r_min of A(<r)/B(<r) for two step masses with common jumps;
// the value is constant between jumps, so right-limits at the breakpoints
// >= r_min plus the value exactly at r_min are exhaustive.
double ratio_sweep(std::vector<Jump> jumps, double r_min) {
  auto entries = cumulate(std::move(jumps));
  double best = 0.0;
  double a_at = 0.0, b_at = 0.0;  // totals over distance < r_min
  for (const auto& e : entries) {
    if (e.d < r_min) {
      a_at = e.a;
      b_at = e.b;
      continue;
    }
    if (e.b > 0.0) best = std::max(best, e.a / e.b);
  }
  if (b_at > 0.0) best = std::max(best, a_at / b_at);
  return best;
}

}  // namespace

double centered_ball_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const Point& x, double r_min) {
  std::vector<Jump> jumps;
  for (size_t i = 0; i < mu.size(); ++i) {
    const double w = std::abs(mu.atom(i).w);
    jumps.push_back({dist(x, mu.atom(i).p), std::abs(f[i]) * w, w});
  }
  return ratio_sweep(std::move(jumps), r_min);
}

double centered_ball_maximal_measure(const AtomicMeasure& mu,
                                     const AtomicMeasure& nu, const Point& x,
                                     double r_min) {
  std::vector<Jump> jumps;
  for (const auto& a : mu.atoms()) jumps.push_back({dist(x, a.p), 0, std::abs(a.w)});
  for (const auto& a : nu.atoms()) jumps.push_back({dist(x, a.p), std::abs(a.w), 0});
  return ratio_sweep(std::move(jumps), r_min);
}

double centered_cube_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const Point& x, double r_min) {
  std::vector<Jump> jumps;
  for (size_t i = 0; i < mu.size(); ++i) {
    const double w = std::abs(mu.atom(i).w);
    jumps.push_back({dist_inf(x, mu.atom(i).p), std::abs(f[i]) * w, w});
  }
  return ratio_sweep(std::move(jumps), r_min);
}

double bilinear_ball_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const std::vector<cplx>& g, const Point& x,
                             double r_min) {
  std::vector<Jump> jumps;
  std::vector<Jump> jumps2;
  for (size_t i = 0; i < mu.size(); ++i) {
    const double w = std::abs(mu.atom(i).w);
    const double d = dist(x, mu.atom(i).p);
    jumps.push_back({d, std::abs(f[i]) * w, w});
    jumps2.push_back({d, std::abs(g[i]) * w, w});
  }
  auto ef = cumulate(std::move(jumps));
  auto eg = cumulate(std::move(jumps2));
  double best = 0.0;
  double ff = 0.0, fm = 0.0, gf = 0.0;
  for (size_t i = 0; i < ef.size(); ++i) {
    if (ef[i].d < r_min) {
      ff = ef[i].a;
      fm = ef[i].b;
      gf = eg[i].a;
      continue;
    }
    if (ef[i].b > 0.0)
      best = std::max(best, (ef[i].a / ef[i].b) * (eg[i].a / ef[i].b));
  }
  if (fm > 0.0) best = std::max(best, (ff / fm) * (gf / fm));
  return best;
}

double noncentered_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                           const Point& x, double r_min,
                           const std::vector<Point>& extra_centers) {
  double best = 0.0;
  auto scan_center = [&](const Point& c) {
    // numerator jumps at atom distances d, denominator (mu(5B)) at d/5; the
    // ratio is constant between combined breakpoints, so right-limits there
    // are exhaustive.
    std::vector<std::pair<double, std::pair<double, double>>> dfw;
    dfw.reserve(mu.size());
    for (size_t i = 0; i < mu.size(); ++i)
      dfw.emplace_back(dist(c, mu.atom(i).p),
                       std::make_pair(std::abs(f[i]) * std::abs(mu.atom(i).w),
                                      std::abs(mu.atom(i).w)));
    std::sort(dfw.begin(), dfw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> dd(dfw.size()), cnum(dfw.size() + 1, 0.0),
        cden(dfw.size() + 1, 0.0);
    for (size_t i = 0; i < dfw.size(); ++i) {
      dd[i] = dfw[i].first;
      cnum[i + 1] = cnum[i] + dfw[i].second.first;
      cden[i + 1] = cden[i] + dfw[i].second.second;
    }
    auto cum_num = [&](double r) {  // sum over dist <= r
      return cnum[std::upper_bound(dd.begin(), dd.end(), r) - dd.begin()];
    };
    auto cum_den = [&](double r) {
      return cden[std::upper_bound(dd.begin(), dd.end(), r) - dd.begin()];
    };
    const double floor_r = std::max(dist(c, x), r_min);
    std::vector<double> cuts;
    cuts.reserve(2 * dd.size() + 1);
    for (double d : dd) {
      cuts.push_back(d);
      cuts.push_back(d / 5.0);
    }
    cuts.push_back(floor_r);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (double t : cuts) {
      if (t < floor_r) continue;
      const double den = cum_den(5.0 * t);
      if (den > 0.0) best = std::max(best, cum_num(t) / den);
    }
  };
  for (const auto& a : mu.atoms()) scan_center(a.p);
  scan_center(x);
  for (const auto& c : extra_centers) scan_center(c);
  return best;
}

namespace {

std::vector<cplx> abs_pow(const std::vector<cplx>& f, double s) {
  std::vector<cplx> out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = std::pow(std::abs(f[i]), s);
  return out;
}

}  // namespace

double centered_ball_maximal_s(const AtomicMeasure& mu,
                               const std::vector<cplx>& f, const Point& x,
                               double s, double r_min) {
  return std::pow(centered_ball_maximal(mu, abs_pow(f, s), x, r_min), 1.0 / s);
}

double centered_cube_maximal_s(const AtomicMeasure& mu,
                               const std::vector<cplx>& f, const Point& x,
                               double s, double r_min) {
  return std::pow(centered_cube_maximal(mu, abs_pow(f, s), x, r_min), 1.0 / s);
}

double noncentered_maximal_s(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const Point& x, double s, double r_min) {
  return std::pow(noncentered_maximal(mu, abs_pow(f, s), x, r_min), 1.0 / s);
}

IntegralBound basic_integral_bound(const AtomicMeasure& nu1,
                                   const AtomicMeasure& nu2, const Point& x,
                                   double t, double m, double alpha) {
  IntegralBound out;
  KahanSum lhs;
  for (const auto& ay : nu1.atoms()) {
    const double dy = dist(x, ay.p);
    for (const auto& az : nu2.atoms()) {
      const double dz = dist(x, az.p);
      lhs.add(std::abs(ay.w) * std::abs(az.w) /
              std::pow(t + dy + dz, 2.0 * m + alpha));
    }
  }
  out.lhs = lhs.value();
  const double r_min = std::max(nu1.resolution(), nu2.resolution());
  out.bound = std::pow(t, -alpha) * bilinear_radial_maximal(nu1, nu2, x, m, r_min);
  out.ratio = out.lhs == 0.0 ? 0.0 : out.lhs / out.bound;
  return out;
}

}  // namespace bcz
