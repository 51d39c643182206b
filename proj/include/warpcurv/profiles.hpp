#pragma once

#include <functional>
#include <string>
#include <vector>

#include "warpcurv/dual.hpp"

// C-infinity transition profiles with exact plateaus. The step is driven by
// the normalized bump integral S(u) = int_0^u exp(-1/(x(1-x))) dx / Z, which
// is identically 0 for u <= 0 and 1 for u >= 1, so profile values and all
// derivatives are bitwise-exact constants outside the transition window.

namespace warpcurv {

struct ScalarProfile {
  std::function<double(double)> value, d1, d2;
  std::string name;

  template <class S>
  S eval(const S& t) const {
    double t0 = value_of(t);
    return lift_c2(value(t0), d1(t0), d2(t0), t);
  }
};

// y0 for t <= t0 + margin, y1 for t >= t1 - margin, smooth monotone between;
// requires 0 < margin < (t1 - t0)/2
ScalarProfile smooth_step(double t0, double t1, double y0, double y1, double margin);

ScalarProfile constant_profile(double c);

// plateau / straight line / plateau: continuous but only C^0 at the kinks.
// Exists to prove the smoothness checks actually catch order-1 breaks.
ScalarProfile linear_ramp(double t0, double t1, double y0, double y1);

// max relative inconsistency of d1/d2 against central differences of value
double profile_derivative_residual(const ScalarProfile& p, double t_lo, double t_hi,
                                   int samples = 256);

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order by
// Newton iteration on the Legendre recurrence
struct QuadratureRule {
  std::vector<double> nodes, weights;
};
const QuadratureRule& gauss_legendre(int n);
double integrate(const std::function<double(double)>& f, double a, double b,
                 int order = 48, int panels = 1);

}  // namespace warpcurv
