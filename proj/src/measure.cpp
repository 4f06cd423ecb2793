#include "bcz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bcz/rng.hpp"
#include "json.hpp"

namespace bcz {

AtomicMeasure::AtomicMeasure(int dim, double resolution, std::vector<Atom> atoms)
    : dim_(dim), resolution_(resolution), atoms_(std::move(atoms)) {
  if (dim_ < 1 || dim_ > kMaxDim) fail("AtomicMeasure: bad dimension");
  if (!(resolution_ > 0.0)) fail("AtomicMeasure: resolution must be positive");
  nonneg_ = true;
  for (auto& a : atoms_) {
    a.p.dim = dim_;
    if (a.w.imag() != 0.0 || a.w.real() < 0.0) nonneg_ = false;
    if (!std::isfinite(a.w.real()) || !std::isfinite(a.w.imag()))
      fail("AtomicMeasure: non-finite weight");
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(a.p.x[i])) fail("AtomicMeasure: non-finite coordinate");
  }
}

double AtomicMeasure::total_variation() const {
  KahanSum s;
  for (const auto& a : atoms_) s.add(std::abs(a.w));
  return s.value();
}

cplx AtomicMeasure::total() const {
  KahanSumC s;
  for (const auto& a : atoms_) s.add(a.w);
  return s.value();
}

cplx AtomicMeasure::mass_ball(const Point& c, double r, bool open) const {
  KahanSumC s;
  for (const auto& a : atoms_) {
    const double d = dist(c, a.p);
    if (open ? d < r : d <= r) s.add(a.w);
  }
  return s.value();
}

cplx AtomicMeasure::mass_cube(const Cube& q) const {
  KahanSumC s;
  for (const auto& a : atoms_)
    if (q.contains(a.p)) s.add(a.w);
  return s.value();
}

cplx AtomicMeasure::mass_strip(const Cube& q, double lambda) const {
  const Cube q2 = q.scaled(2.0);
  const double cut = lambda * q.side();
  KahanSumC s;
  for (const auto& a : atoms_)
    if (q2.contains(a.p) && q.boundary_dist(a.p) <= cut) s.add(a.w);
  return s.value();
}

AtomicMeasure AtomicMeasure::restricted(
    const std::function<bool(const Point&)>& keep) const {
  std::vector<Atom> kept;
  for (const auto& a : atoms_)
    if (keep(a.p)) kept.push_back(a);
  return AtomicMeasure(dim_, resolution_, std::move(kept));
}

AtomicMeasure AtomicMeasure::restricted_to(const Cube& q) const {
  return restricted([&](const Point& p) { return q.contains(p); });
}

AtomicMeasure AtomicMeasure::weighted(const std::vector<cplx>& f) const {
  if (f.size() != atoms_.size()) fail("weighted: size mismatch");
  std::vector<Atom> out = atoms_;
  for (size_t i = 0; i < out.size(); ++i) out[i].w *= f[i];
  return AtomicMeasure(dim_, resolution_, std::move(out));
}

AtomicMeasure AtomicMeasure::normalized() const {
  const double tv = total_variation();
  if (tv == 0.0) fail("normalized: zero measure");
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.w /= tv;
  return AtomicMeasure(dim_, resolution_, std::move(out));
}

double AtomicMeasure::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < atoms_.size(); ++i)
    for (size_t j = i + 1; j < atoms_.size(); ++j)
      best = std::min(best, dist(atoms_[i].p, atoms_[j].p));
  return best;
}

Cube AtomicMeasure::bounding_cube(double pad) const {
  Point lo = Point::zero(dim_), hi = Point::zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    lo.x[i] = std::numeric_limits<double>::infinity();
    hi.x[i] = -std::numeric_limits<double>::infinity();
  }
  for (const auto& a : atoms_)
    for (int i = 0; i < dim_; ++i) {
      lo.x[i] = std::min(lo.x[i], a.p.x[i]);
      hi.x[i] = std::max(hi.x[i], a.p.x[i]);
    }
  if (atoms_.empty())
    return Cube(Point::zero(dim_), std::max(pad, 1.0), true);
  double h = 0.0;
  Point c = Point::zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    c.x[i] = 0.5 * (lo.x[i] + hi.x[i]);
    h = std::max(h, 0.5 * (hi.x[i] - lo.x[i]));
  }
  h += pad;
  if (h <= 0.0) h = std::max(resolution_, 1e-9);
  return Cube(c, h, true);
}

double AtomicMeasure::diameter() const {
  double best = 0.0;
  for (size_t i = 0; i < atoms_.size(); ++i)
    for (size_t j = i + 1; j < atoms_.size(); ++j)
      best = std::max(best, dist(atoms_[i].p, atoms_[j].p));
  return best;
}

std::string AtomicMeasure::to_json() const {
  nlohmann::json j;
  j["dim"] = dim_;
  j["resolution"] = resolution_;
  auto arr = nlohmann::json::array();
  for (const auto& a : atoms_) {
    nlohmann::json e;
    auto xs = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i) xs.push_back(a.p.x[i]);
    e["x"] = xs;
    e["re"] = a.w.real();
    e["im"] = a.w.imag();
    arr.push_back(e);
  }
  j["atoms"] = arr;
  return j.dump(2);
}

AtomicMeasure AtomicMeasure::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int dim = j.at("dim").get<int>();
  const double res = j.at("resolution").get<double>();
  std::vector<Atom> atoms;
  for (const auto& e : j.at("atoms")) {
    Atom a;
    a.p.dim = dim;
    const auto& xs = e.at("x");
    for (int i = 0; i < dim; ++i) a.p.x[i] = xs.at(i).get<double>();
    a.w = cplx(e.at("re").get<double>(),
               e.contains("im") ? e.at("im").get<double>() : 0.0);
    atoms.push_back(a);
  }
  return AtomicMeasure(dim, res, std::move(atoms));
}

// ---- growth / doubling / small boundary -----------------------------------

namespace {

// Sorted distance breakpoints with cumulative mass through each distance.
struct RadialProfile {
  std::vector<double> d;    // distinct distances, ascending
  std::vector<double> cum;  // total |w| over atoms with distance <= d[i]
};

RadialProfile radial_profile(const AtomicMeasure& mu, const Point& x) {
  std::vector<std::pair<double, double>> dw;
  dw.reserve(mu.size());
  for (const auto& a : mu.atoms()) dw.emplace_back(dist(x, a.p), std::abs(a.w));
  std::sort(dw.begin(), dw.end());
  RadialProfile out;
  KahanSum run;
  for (size_t i = 0; i < dw.size(); ++i) {
    run.add(dw[i].second);
    if (i + 1 == dw.size() || dw[i + 1].first != dw[i].first) {
      out.d.push_back(dw[i].first);
      out.cum.push_back(run.value());
    }
  }
  return out;
}

}  // namespace

GrowthCertificate growth_constant(const AtomicMeasure& mu, double m,
                                  double r_min,
                                  const std::vector<Point>& extra_centers) {
  if (!mu.nonneg()) fail("growth_constant: measure must be nonnegative");
  if (r_min < mu.resolution())
    fail("growth_constant: r_min below measure resolution");
  GrowthCertificate cert{m, r_min, 0.0};

  auto scan_center = [&](const Point& x) {
    const RadialProfile prof = radial_profile(mu, x);
    // Right-limit at each breakpoint: atoms within distance <= d divided by
    // max(d, r_min)^m.  Exact for the sup over r >= r_min, the clamp covering
    // the breakpoint r = r_min itself.
    for (size_t i = 0; i < prof.d.size(); ++i) {
      const double r = std::max(prof.d[i], r_min);
      cert.constant = std::max(cert.constant, prof.cum[i] / std::pow(r, m));
    }
  };

  for (const auto& a : mu.atoms()) scan_center(a.p);
  for (const auto& p : extra_centers) scan_center(p);
  return cert;
}

bool is_doubling(const AtomicMeasure& mu, const Cube& q, double alpha,
                 double beta) {
  if (!(alpha > 1.0) || !(beta > 0.0)) fail("is_doubling: need alpha>1, beta>0");
  const double big = mu.mass_cube(q.scaled(alpha)).real();
  const double small = mu.mass_cube(q).real();
  return big <= beta * small;
}

double small_boundary_constant(const AtomicMeasure& mu, const Cube& q) {
  const Cube q2 = q.scaled(2.0);
  const double m2 = std::abs(mu.mass_cube(q2));
  std::vector<std::pair<double, double>> bd;  // (lambda_i, |w|)
  for (const auto& a : mu.atoms())
    if (q2.contains(a.p))
      bd.emplace_back(q.boundary_dist(a.p) / q.side(), std::abs(a.w));
  if (bd.empty()) return 0.0;
  std::sort(bd.begin(), bd.end());
  if (bd.front().first <= 0.0) return std::numeric_limits<double>::infinity();
  // strip mass is a step function of lambda; the jumps are the worst points
  double worst = 0.0;
  KahanSum run;
  for (size_t i = 0; i < bd.size(); ++i) {
    run.add(bd[i].second);
    if (i + 1 == bd.size() || bd[i + 1].first != bd[i].first)
      worst = std::max(worst, run.value() / (bd[i].first * m2));
  }
  return worst;
}

bool has_small_boundary(const AtomicMeasure& mu, const Cube& q, double t) {
  if (!(t > 0.0)) fail("has_small_boundary: need t>0");
  return small_boundary_constant(mu, q) <= t;
}

SmallBoundaryScan find_small_boundary_cube(const AtomicMeasure& mu,
                                           const Point& x, double eps, double t,
                                           double c_n, int scan_points) {
  SmallBoundaryScan out;
  if (eps < mu.resolution())
    fail("find_small_boundary_cube: eps below resolution");
  const double sqrt_n = std::sqrt(static_cast<double>(x.dim));
  const double h_hi = c_n * eps / sqrt_n;
  if (!(h_hi > eps)) fail("find_small_boundary_cube: c_n too small");
  const double ratio = std::pow(h_hi / eps, 1.0 / scan_points);
  for (int j = 0; j < scan_points; ++j) {
    const double h = eps * std::pow(ratio, j);
    Cube r(x, h, true);
    if (has_small_boundary(mu, r, t)) {
      out.cube = r;
      return out;
    }
    out.rejected_halfsides.push_back(h);
  }
  return out;  // empty cube: search failed, trace carries the breakpoints
}

Cube smallest_big_doubling_ancestor(const AtomicMeasure& mu, const Cube& q,
                                    double m, int* k_out) {
  if (!mu.nonneg()) fail("smallest_big_doubling_ancestor: need nonneg measure");
  const double beta = std::pow(6.0, m + 1.0);
  Cube cur = q;
  int k = 0;
  const double whole = mu.total_variation();
  for (;;) {
    const double inner = mu.mass_cube(cur).real();
    const double outer = mu.mass_cube(cur.scaled(6.0)).real();
    if (outer <= beta * inner) break;
    // once the cube holds everything the ratio is 1, so this terminates
    if (inner >= whole) break;
    cur = cur.scaled(6.0);
    ++k;
  }
  if (k_out) *k_out = k;
  return cur;
}

// ---- generators ------------------------------------------------------------

AtomicMeasure generate_cantor_4corner(int level) {
  if (level < 0 || level > 8) fail("cantor4corner: level out of budget");
  std::vector<Point> cells{Point{0.0, 0.0}};
  double side = 1.0;
  for (int l = 0; l < level; ++l) {
    std::vector<Point> next;
    next.reserve(cells.size() * 4);
    const double s = side / 4.0;
    for (const auto& c : cells)
      for (int bx = 0; bx < 2; ++bx)
        for (int by = 0; by < 2; ++by)
          next.push_back(Point{c.x[0] + bx * 3.0 * s, c.x[1] + by * 3.0 * s});
    cells = std::move(next);
    side = s;
  }
  const double w = 1.0 / static_cast<double>(cells.size());
  std::vector<Atom> atoms;
  atoms.reserve(cells.size());
  for (const auto& c : cells)
    atoms.push_back({Point{c.x[0] + side / 2.0, c.x[1] + side / 2.0}, w});
  return AtomicMeasure(2, side, std::move(atoms));
}

AtomicMeasure generate_cantor_1d(int level) {
  if (level < 0 || level > 16) fail("cantor1d: level out of budget");
  std::vector<double> cells{0.0};
  double side = 1.0;
  for (int l = 0; l < level; ++l) {
    std::vector<double> next;
    next.reserve(cells.size() * 2);
    const double s = side / 4.0;
    for (double c : cells) {
      next.push_back(c);
      next.push_back(c + 3.0 * s);
    }
    cells = std::move(next);
    side = s;
  }
  const double w = 1.0 / static_cast<double>(cells.size());
  std::vector<Atom> atoms;
  for (double c : cells) atoms.push_back({Point{c + side / 2.0}, w});
  return AtomicMeasure(1, side, std::move(atoms));
}

AtomicMeasure generate_uniform_cube(int dim, int count) {
  if (count < 1 || std::pow(count, dim) > 1e5) fail("uniform_cube: bad count");
  std::vector<Atom> atoms;
  const double cell = 1.0 / count;
  const double w = std::pow(cell, dim);
  std::vector<int> idx(dim, 0);
  for (;;) {
    Point p = Point::zero(dim);
    for (int i = 0; i < dim; ++i) p.x[i] = (idx[i] + 0.5) * cell;
    atoms.push_back({p, w});
    int i = 0;
    while (i < dim && ++idx[i] == count) idx[i++] = 0;
    if (i == dim) break;
  }
  return AtomicMeasure(dim, cell, std::move(atoms));
}

AtomicMeasure generate_random(int dim, int count, uint64_t seed) {
  if (count < 1 || count > 100000) fail("random: bad count");
  Rng rng(seed);
  std::vector<Atom> atoms;
  atoms.reserve(count);
  const double w = 1.0 / count;
  for (int i = 0; i < count; ++i) {
    Point p = Point::zero(dim);
    for (int d = 0; d < dim; ++d) p.x[d] = rng.next_double();
    atoms.push_back({p, w});
  }
  AtomicMeasure tmp(dim, 1.0, atoms);
  const double sep = tmp.min_separation();
  const double res =
      std::isfinite(sep) ? std::max(sep, 1e-12) : 1.0 / std::max(count, 1);
  return AtomicMeasure(dim, res, std::move(atoms));
}

AtomicMeasure generate(const std::string& kind, int dim, int level_or_count,
                       uint64_t seed) {
  if (kind == "cantor4corner" || kind == "cantor4")
    return generate_cantor_4corner(level_or_count);
  if (kind == "cantor1d") return generate_cantor_1d(level_or_count);
  if (kind == "uniform_cube" || kind == "uniform")
    return generate_uniform_cube(dim, level_or_count);
  if (kind == "random") return generate_random(dim, level_or_count, seed);
  fail("generate: unknown kind '" + kind + "'");
}

}  // namespace bcz
