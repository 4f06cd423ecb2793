#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcz/common.hpp"
#include "bcz/geometry.hpp"
#include "bcz/rng.hpp"

namespace bcz {

// Nonnegative 1-Lipschitz function represented as a finite max of 1-Lipschitz
// pieces: cones (h - |x-apex|)_+, a constant floor, and an optional boundary
// profile max(level - dist(x, dQ0), 0).  1-Lipschitzness is structural and the
// zero set is exactly computable.
class LipschitzProfile {
 public:
  struct Cone {
    Point apex;
    double height = 0.0;
  };
  struct BoundaryTerm {
    Cube q0;
    double level = 0.0;
  };

  LipschitzProfile() = default;

  static LipschitzProfile zero() { return {}; }
  static LipschitzProfile constant(double c) {
    LipschitzProfile p;
    p.floor_ = c;
    return p;
  }

  void add_cone(const Point& apex, double height) {
    if (height > 0.0) cones_.push_back({apex, height});
  }
  void set_floor(double f) { floor_ = f; }
  void set_boundary_term(const Cube& q0, double level) {
    boundary_ = BoundaryTerm{q0, level};
  }

  double floor() const { return floor_; }
  const std::vector<Cone>& cones() const { return cones_; }
  const std::optional<BoundaryTerm>& boundary_term() const { return boundary_; }
  bool is_zero() const {
    return floor_ == 0.0 && cones_.empty() &&
           (!boundary_ || boundary_->level <= 0.0);
  }

  double operator()(const Point& x) const {
    double v = floor_;
    for (const auto& c : cones_)
      v = std::max(v, c.height - dist(x, c.apex));
    if (boundary_) v = std::max(v, boundary_->level - boundary_->q0.boundary_dist(x));
    return std::max(v, 0.0);
  }

  // pointwise max of two profiles
  static LipschitzProfile max(const LipschitzProfile& a,
                              const LipschitzProfile& b);

  std::string to_json() const;
  static LipschitzProfile from_json(const std::string& text);

 private:
  std::vector<Cone> cones_;
  double floor_ = 0.0;
  std::optional<BoundaryTerm> boundary_;
};

// Worst sampled slope sup |phi(x)-phi(y)|/|x-y|; must stay <= 1 + 1e-9.
double lipschitz_audit(const LipschitzProfile& phi,
                       const std::vector<std::pair<Point, Point>>& pairs);

struct KernelParams {
  double m = 1.0;       // growth dimension
  double alpha = 1.0;   // Hoelder exponent in (0,1]
  double c_k = 1.0;     // size/Hoelder constant
};

// Bilinear m-dimensional CZ kernel: an evaluator off the full diagonal
// {x = y = z} plus its declared parameters.
class BilinearKernel {
 public:
  using Eval = std::function<cplx(const Point&, const Point&, const Point&)>;

  BilinearKernel() = default;
  BilinearKernel(KernelParams params, Eval eval, std::string name)
      : params_(params), eval_(std::move(eval)), name_(std::move(name)) {}

  const KernelParams& params() const { return params_; }
  const std::string& name() const { return name_; }

  cplx operator()(const Point& x, const Point& y, const Point& z) const {
    if (dist(x, y) + dist(x, z) == 0.0)
      fail("kernel evaluated on the full diagonal");
    return eval_(x, y, z);
  }

 private:
  KernelParams params_;
  Eval eval_;
  std::string name_;
};

// K(x,y,z) = (|x-y| + |x-z|)^{-2m}; the size condition holds with equality.
BilinearKernel scalar_model_kernel(double m, double alpha = 1.0);

// ((y-x).e) / (|x-y| + |x-z|)^{2m+1}, antisymmetric in (x,y) along axis e.
BilinearKernel antisymmetric_kernel(double m, int axis = 0);

BilinearKernel scale_kernel(const BilinearKernel& k, double factor);

// which = 1: K*(x,y,z) = K(y,x,z); which = 2: K*(x,y,z) = K(z,y,x).
// Gives <T(f,g),h> = <T^{1*}(h,g),f> = <T^{2*}(f,h),g> for atomic data.
BilinearKernel adjoint_kernel(const BilinearKernel& k, int which);

// A_Phi(x,y,z) = d^{3b} / (d^{3b} + Phi(x)^b Phi(y)^b Phi(z)^b),
// d = |x-y| + |x-z|, b = max(1, 2m/3).
double suppression_beta(double m);
double eval_A_phi(const LipschitzProfile& phi, double m, const Point& x,
                  const Point& y, const Point& z);

// K_Phi = A_Phi * K; a standard kernel with the same parameters plus the
// improved size bound with Phi terms in the denominator.
BilinearKernel suppressed_kernel(const BilinearKernel& base,
                                 const LipschitzProfile& phi);

struct KernelSamplerConfig {
  int dim = 1;
  double scale_min = 1e-3;
  double scale_max = 1.0;
  int strata = 12;             // log-spaced scale bands
  int samples_per_stratum = 64;
  uint64_t seed = 1;
};

struct KernelConditionReport {
  double size_ratio = 0.0;       // sup |K| d^{2m}
  double x_hoelder_ratio = 0.0;  // sup |K(x)-K(x')| d^{2m+a} / |x-x'|^a
  double y_hoelder_ratio = 0.0;
  double z_hoelder_ratio = 0.0;
  double improved_size_ratio = 0.0;  // sup |K_Phi| (d + Phi sums)^{2m}
  int degenerate_skipped = 0;
  int threshold_samples = 0;  // Hoelder samples at the exact admissibility edge
  bool pass(double ceiling) const {
    return size_ratio <= ceiling && x_hoelder_ratio <= ceiling &&
           y_hoelder_ratio <= ceiling && z_hoelder_ratio <= ceiling;
  }
};

KernelConditionReport verify_kernel_conditions(
    const BilinearKernel& k, const KernelSamplerConfig& cfg,
    const LipschitzProfile* phi_for_improved_size = nullptr);

// Sampled lower bound c for the comparison
//   d^{3b} + (Phi(x)Phi(y)Phi(z))^b >= c (d^{3b} + Phi(x)^{3b} + Phi(y)^{3b} + Phi(z)^{3b}).
double key_comparison_constant(const LipschitzProfile& phi, double m,
                               const KernelSamplerConfig& cfg);

}  // namespace bcz
