#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bcz/kernel.hpp"
#include "bcz/measure.hpp"

namespace bcz {

// Scale-indexed kernel family s_t(x,y,z) with size/Hoelder bounds of the
// square-function type.
class SquareKernelFamily {
 public:
  using Eval =
      std::function<cplx(double, const Point&, const Point&, const Point&)>;

  SquareKernelFamily() = default;
  SquareKernelFamily(KernelParams params, Eval eval, std::string name)
      : params_(params), eval_(std::move(eval)), name_(std::move(name)) {}

  const KernelParams& params() const { return params_; }
  const std::string& name() const { return name_; }
  cplx operator()(double t, const Point& x, const Point& y,
                  const Point& z) const {
    return eval_(t, x, y, z);
  }

 private:
  KernelParams params_;
  Eval eval_;
  std::string name_;
};

// s_t(x,y,z) = t^{2a} / ((t+|x-y|)^{m+a} (t+|x-z|)^{m+a}); the size condition
// holds with equality.
SquareKernelFamily shipped_square_family(double m, double alpha);

// theta_t(nu1,nu2)(x): exact double sum.
cplx theta_t(const SquareKernelFamily& fam, const AtomicMeasure& nu1,
             const AtomicMeasure& nu2, const Point& x, double t);

// Logarithmic quadrature grid over [t_min, t_max] for the dt/t integral.
struct ScaleQuadrature {
  double t_min = 1e-3;
  double t_max = 8.0;
  int per_octave = 8;

  std::vector<double> nodes() const;
  double log_step() const { return std::log(2.0) / per_octave; }
};

// BV = (int |theta_t|^2 dt/t)^{1/2} by midpoint quadrature on the log grid;
// cutoff (BV^A) truncates the integral at t <= A.
double bv(const SquareKernelFamily& fam, const AtomicMeasure& nu1,
          const AtomicMeasure& nu2, const Point& x, const ScaleQuadrature& quad,
          double cutoff = std::numeric_limits<double>::infinity());

// Fraction of the squared BV integral carried by the top octave of the grid;
// a tail that fails to decay signals a non-convergent dt/t integral.
double bv_tail_fraction(const SquareKernelFamily& fam, const AtomicMeasure& nu1,
                        const AtomicMeasure& nu2, const Point& x,
                        const ScaleQuadrature& quad);

struct SquareKernelReport {
  double size_ratio = 0.0;
  double x_hoelder_ratio = 0.0;
  double y_hoelder_ratio = 0.0;
  double z_hoelder_ratio = 0.0;
};

SquareKernelReport verify_sq_kernel(const SquareKernelFamily& fam,
                                    const KernelSamplerConfig& cfg);

// sup_l l^p mu({x in Q \ H : BV^{l(Q)}(1_Q,1_Q) > l}) / mu(Q), exact over the
// atomic level-set breakpoints.
double t1_testing_statistic(const SquareKernelFamily& fam,
                            const AtomicMeasure& mu, const Cube& q,
                            const std::vector<char>& in_h, double exponent_l,
                            const ScaleQuadrature& quad);

}  // namespace bcz
