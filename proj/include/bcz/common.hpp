#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bcz {

using cplx = std::complex<double>;

// Neumaier-compensated accumulator. The operator sweeps sum millions of
// kernel values spanning many orders of magnitude; plain accumulation loses
// the small tails that the breakpoint identities rely on.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanSumC {
 public:
  void add(const cplx& v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

inline bool almost_equal(double a, double b, double rel_tol,
                         double abs_tol = 1e-300) {
  const double diff = std::abs(a - b);
  return diff <= abs_tol || diff <= rel_tol * std::max(std::abs(a), std::abs(b));
}

inline bool almost_equal(const cplx& a, const cplx& b, double rel_tol,
                         double abs_tol = 1e-300) {
  const double diff = std::abs(a - b);
  return diff <= abs_tol || diff <= rel_tol * std::max(std::abs(a), std::abs(b));
}

[[noreturn]] inline void fail(const std::string& what) {
  throw std::runtime_error(what);
}

}  // namespace bcz
