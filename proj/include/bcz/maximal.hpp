#pragma once

#include <vector>

#include "bcz/measure.hpp"

namespace bcz {

// All suprema are exact over the breakpoint family induced by atom distances
// (right-limit values), quantified over radii >= r_min.  Zero-mass balls
// contribute zero averages.

// M_m nu(x) = sup_r |nu|(B(x,r)) / r^m
double radial_maximal_measure(const AtomicMeasure& nu, const Point& x, double m,
                              double r_min);

// M_{mu,m} f(x) = sup_r r^{-m} int_{B(x,r)} |f| dmu
double radial_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                      const Point& x, double m, double r_min);

// M_m(nu1,nu2)(x) = sup_r |nu1|(B)/r^m * |nu2|(B)/r^m over a common ball
double bilinear_radial_maximal(const AtomicMeasure& nu1,
                               const AtomicMeasure& nu2, const Point& x,
                               double m, double r_min);

// M_mu f(x) = sup_r <|f|>_{B(x,r)}
double centered_ball_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const Point& x, double r_min);

// M_mu nu(x) = sup_r |nu|(B(x,r)) / mu(B(x,r))
double centered_ball_maximal_measure(const AtomicMeasure& mu,
                                     const AtomicMeasure& nu, const Point& x,
                                     double r_min);

// M^Q_mu f(x) = sup_r <|f|>_{Q(x,r)} over open cubes of side 2r
double centered_cube_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const Point& x, double r_min);

// M_mu(f,g)(x): common-ball product of averages
double bilinear_ball_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const std::vector<cplx>& g, const Point& x,
                             double r_min);

// N_mu f(x) = sup over balls B containing x of (1/mu(5B)) int_B |f| dmu,
// computed over candidate centres (atoms plus x plus extras); a certified
// lower bound of the continuum sup, consistent on both sides of every check.
double noncentered_maximal(const AtomicMeasure& mu, const std::vector<cplx>& f,
                           const Point& x, double r_min,
                           const std::vector<Point>& extra_centers = {});

// s-adapted wrapper M_{mu,s} f = (M_mu |f|^s)^{1/s}
double centered_ball_maximal_s(const AtomicMeasure& mu,
                               const std::vector<cplx>& f, const Point& x,
                               double s, double r_min);
double centered_cube_maximal_s(const AtomicMeasure& mu,
                               const std::vector<cplx>& f, const Point& x,
                               double s, double r_min);
double noncentered_maximal_s(const AtomicMeasure& mu, const std::vector<cplx>& f,
                             const Point& x, double s, double r_min);

struct IntegralBound {
  double lhs = 0.0;    // iint d|nu1| d|nu2| / (t + |x-y| + |x-z|)^{2m+alpha}
  double bound = 0.0;  // t^{-alpha} M_m(nu1,nu2)(x)
  double ratio = 0.0;
};

IntegralBound basic_integral_bound(const AtomicMeasure& nu1,
                                   const AtomicMeasure& nu2, const Point& x,
                                   double t, double m, double alpha);

}  // namespace bcz
