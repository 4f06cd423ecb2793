#include "bcz/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace bcz {

LipschitzProfile LipschitzProfile::max(const LipschitzProfile& a,
                                       const LipschitzProfile& b) {
  LipschitzProfile out = a;
  out.floor_ = std::max(a.floor_, b.floor_);
  out.cones_.insert(out.cones_.end(), b.cones_.begin(), b.cones_.end());
  if (b.boundary_) {
    if (out.boundary_) fail("LipschitzProfile::max: two boundary terms");
    out.boundary_ = b.boundary_;
  }
  return out;
}

std::string LipschitzProfile::to_json() const {
  nlohmann::json j;
  j["floor"] = floor_;
  auto cs = nlohmann::json::array();
  for (const auto& c : cones_) {
    nlohmann::json e;
    auto xs = nlohmann::json::array();
    for (int i = 0; i < c.apex.dim; ++i) xs.push_back(c.apex.x[i]);
    e["apex"] = xs;
    e["height"] = c.height;
    cs.push_back(e);
  }
  j["cones"] = cs;
  if (boundary_) {
    nlohmann::json b;
    auto xs = nlohmann::json::array();
    for (int i = 0; i < boundary_->q0.dim(); ++i)
      xs.push_back(boundary_->q0.center.x[i]);
    b["center"] = xs;
    b["halfside"] = boundary_->q0.halfside;
    b["level"] = boundary_->level;
    j["boundary"] = b;
  }
  return j.dump(2);
}

LipschitzProfile LipschitzProfile::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LipschitzProfile p;
  p.floor_ = j.value("floor", 0.0);
  if (j.contains("cones"))
    for (const auto& e : j["cones"]) {
      Point apex;
      const auto& xs = e.at("apex");
      apex.dim = static_cast<int>(xs.size());
      for (int i = 0; i < apex.dim; ++i) apex.x[i] = xs.at(i).get<double>();
      p.add_cone(apex, e.at("height").get<double>());
    }
  if (j.contains("boundary")) {
    const auto& b = j["boundary"];
    Point c;
    const auto& xs = b.at("center");
    c.dim = static_cast<int>(xs.size());
    for (int i = 0; i < c.dim; ++i) c.x[i] = xs.at(i).get<double>();
    p.set_boundary_term(Cube(c, b.at("halfside").get<double>()),
                        b.at("level").get<double>());
  }
  return p;
}

double lipschitz_audit(const LipschitzProfile& phi,
                       const std::vector<std::pair<Point, Point>>& pairs) {
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const double d = dist(a, b);
    if (d == 0.0) continue;
    worst = std::max(worst, std::abs(phi(a) - phi(b)) / d);
  }
  return worst;
}

BilinearKernel scalar_model_kernel(double m, double alpha) {
  return BilinearKernel(
      KernelParams{m, alpha, 1.0},
      [m](const Point& x, const Point& y, const Point& z) -> cplx {
        const double d = dist(x, y) + dist(x, z);
        return cplx(std::pow(d, -2.0 * m), 0.0);
      },
      "scalar_model");
}

BilinearKernel antisymmetric_kernel(double m, int axis) {
  return BilinearKernel(
      KernelParams{m, 1.0, 1.0},
      [m, axis](const Point& x, const Point& y, const Point& z) -> cplx {
        const double d = dist(x, y) + dist(x, z);
        return cplx((y.x[axis] - x.x[axis]) / std::pow(d, 2.0 * m + 1.0), 0.0);
      },
      "antisymmetric");
}

BilinearKernel scale_kernel(const BilinearKernel& k, double factor) {
  KernelParams p = k.params();
  p.c_k *= std::abs(factor);
  return BilinearKernel(
      p,
      [k, factor](const Point& x, const Point& y, const Point& z) {
        return factor * k(x, y, z);
      },
      k.name() + "_scaled");
}

BilinearKernel adjoint_kernel(const BilinearKernel& k, int which) {
  if (which != 1 && which != 2) fail("adjoint_kernel: which must be 1 or 2");
  if (which == 1)
    return BilinearKernel(
        k.params(),
        [k](const Point& x, const Point& y, const Point& z) {
          return k(y, x, z);
        },
        k.name() + "_adj1");
  return BilinearKernel(
      k.params(),
      [k](const Point& x, const Point& y, const Point& z) {
        return k(z, y, x);
      },
      k.name() + "_adj2");
}

double suppression_beta(double m) { return std::max(1.0, 2.0 * m / 3.0); }

double eval_A_phi(const LipschitzProfile& phi, double m, const Point& x,
                  const Point& y, const Point& z) {
  const double d = dist(x, y) + dist(x, z);
  if (d == 0.0) fail("A_phi evaluated on the full diagonal");
  const double beta = suppression_beta(m);
  const double prod = phi(x) * phi(y) * phi(z);
  if (prod == 0.0) return 1.0;
  const double d3b = std::pow(d, 3.0 * beta);
  return d3b / (d3b + std::pow(prod, beta));
}

BilinearKernel suppressed_kernel(const BilinearKernel& base,
                                 const LipschitzProfile& phi) {
  const double m = base.params().m;
  return BilinearKernel(
      base.params(),
      [base, phi, m](const Point& x, const Point& y, const Point& z) {
        return eval_A_phi(phi, m, x, y, z) * base(x, y, z);
      },
      base.name() + "_suppressed");
}

namespace {

Point random_point(Rng& rng, int dim, double box) {
  Point p = Point::zero(dim);
  for (int i = 0; i < dim; ++i) p.x[i] = rng.uniform(-box, box);
  return p;
}

Point offset_point(Rng& rng, const Point& base, double length) {
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

KernelConditionReport verify_kernel_conditions(
    const BilinearKernel& k, const KernelSamplerConfig& cfg,
    const LipschitzProfile* phi_for_improved_size) {
  KernelConditionReport rep;
  Rng rng(cfg.seed);
  const double m = k.params().m;
  const double alpha = k.params().alpha;
  const double log_lo = std::log(cfg.scale_min);
  const double log_hi = std::log(cfg.scale_max);

  for (int s = 0; s < cfg.strata; ++s) {
    const double scale =
        std::exp(log_lo + (log_hi - log_lo) * (s + 0.5) / cfg.strata);
    for (int i = 0; i < cfg.samples_per_stratum; ++i) {
      const Point x = random_point(rng, cfg.dim, cfg.scale_max);
      const Point y = offset_point(rng, x, scale * rng.uniform(0.5, 1.5));
      const Point z = offset_point(rng, x, scale * rng.uniform(0.5, 1.5));
      const double d = dist(x, y) + dist(x, z);
      if (d == 0.0) {
        ++rep.degenerate_skipped;
        continue;
      }
      const double kv = std::abs(k(x, y, z));
      rep.size_ratio = std::max(rep.size_ratio, kv * std::pow(d, 2.0 * m));
      if (phi_for_improved_size) {
        const auto& phi = *phi_for_improved_size;
        const double dd = d + phi(x) + phi(y) + phi(z);
        rep.improved_size_ratio =
            std::max(rep.improved_size_ratio, kv * std::pow(dd, 2.0 * m));
      }

      // Hoelder moves: |x-x'| <= max(|x-y|,|x-z|)/2, non-strict; a deliberate
      // threshold sample is taken on the last iteration of each stratum.
      const double cap = std::max(dist(x, y), dist(x, z)) / 2.0;
      const bool at_threshold = (i + 1 == cfg.samples_per_stratum);
      const double move = at_threshold ? cap : cap * rng.uniform(0.05, 0.999);
      if (at_threshold) ++rep.threshold_samples;
      const double denom =
          std::pow(d, 2.0 * m + alpha) / std::pow(move, alpha);

      const Point xm = offset_point(rng, x, move);
      if (dist(xm, y) + dist(xm, z) > 0.0)
        rep.x_hoelder_ratio = std::max(rep.x_hoelder_ratio,
                                       std::abs(k(x, y, z) - k(xm, y, z)) * denom);
      const Point ym = offset_point(rng, y, move);
      if (dist(x, ym) + dist(x, z) > 0.0)
        rep.y_hoelder_ratio = std::max(rep.y_hoelder_ratio,
                                       std::abs(k(x, y, z) - k(x, ym, z)) * denom);
      const Point zm = offset_point(rng, z, move);
      if (dist(x, y) + dist(x, zm) > 0.0)
        rep.z_hoelder_ratio = std::max(rep.z_hoelder_ratio,
                                       std::abs(k(x, y, z) - k(x, y, zm)) * denom);
    }
  }
  return rep;
}

double key_comparison_constant(const LipschitzProfile& phi, double m,
                               const KernelSamplerConfig& cfg) {
  Rng rng(cfg.seed);
  const double beta = suppression_beta(m);
  double worst = std::numeric_limits<double>::infinity();
  const double log_lo = std::log(cfg.scale_min);
  const double log_hi = std::log(cfg.scale_max);
  for (int s = 0; s < cfg.strata; ++s) {
    const double scale =
        std::exp(log_lo + (log_hi - log_lo) * (s + 0.5) / cfg.strata);
    for (int i = 0; i < cfg.samples_per_stratum; ++i) {
      const Point x = random_point(rng, cfg.dim, cfg.scale_max);
      const Point y = offset_point(rng, x, scale * rng.uniform(0.5, 1.5));
      const Point z = offset_point(rng, x, scale * rng.uniform(0.5, 1.5));
      const double d = dist(x, y) + dist(x, z);
      if (d == 0.0) continue;
      const double d3b = std::pow(d, 3.0 * beta);
      const double px = phi(x), py = phi(y), pz = phi(z);
      const double lhs = d3b + std::pow(px * py * pz, beta);
      const double rhs = d3b + std::pow(px, 3 * beta) + std::pow(py, 3 * beta) +
                         std::pow(pz, 3 * beta);
      worst = std::min(worst, lhs / rhs);
    }
  }
  return worst;
}

}  // namespace bcz
