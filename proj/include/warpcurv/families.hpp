#pragma once

#include <array>
#include <optional>
#include <vector>

#include "warpcurv/chart_metric.hpp"
#include "warpcurv/gluing.hpp"
#include "warpcurv/profiles.hpp"
#include "warpcurv/warp.hpp"

// The pinched metric families on (factor x S^1 x (0,6)). All hyperbolic
// functions in family evaluators are written as (e^x +- e^-x)/2 so that
// families which should coincide (e.g. the s = 1 member and the plain
// rescaled tube) match bitwise, not just within tolerance.

namespace warpcurv {

// transitions over [2,3], [3,4], [4,5]: -1 -> 1, 0 -> 1, 1 -> -1,
// constant outside and on margin-wide plateaus inside
std::array<ScalarProfile, 3> delta_profiles(double margin);

// interpolation weight on [1/2, 1]: 1 at 1/2, 0 at 1, constant near both
ScalarProfile eta_profile(double margin);

// cosh^2(t) sigma_N + sinh^2(t) sigma_S1 + dt^2, t in (0, len)
ChartMetric tube_metric(const ChartMetric& sigma_N, double len);

// cosh^2(at) sigma_N + sinh^2(at) sigma_S1 + a^2 dt^2 on (0,6), a = r/6;
// isometric to the tube of length r via t -> at
ChartMetric build_rho_r(double r, const ChartMetric& sigma_N);

struct PiecewiseWarpMetric {
  double r = 0.0, alpha = 0.0, margin = 0.1;
  ChartMetric sigma_N, sigma_S1;
  std::array<ScalarProfile, 3> deltas;
  GluingMap gluing;            // identity when untwisted
  std::optional<double> eta;   // set: upper-half-family table, gluing unused

  static constexpr std::array<double, 4> knots{2.0, 3.0, 4.0, 5.0};

  int dim() const { return sigma_N.dim + 2; }
  std::array<double, 2> branch_interval(int k) const;  // k in 1..5
  Box factor_box() const;                              // sigma_N axes + circle axis
  ChartMetric chart() const;                           // t-dispatched evaluator
  ChartMetric branch(int k) const;                     // frozen on branch k
};

// the five-branch twisted family; construction checks branch positive
// definiteness and order-0 breakpoint agreement (throws FamilyError naming
// the breakpoint on mismatch)
PiecewiseWarpMetric build_lambda_r(double r, const ChartMetric& sigma_N,
                                   const GluingMap& f, double margin = 0.1);

// family member at parameter s in [0,1]: twist table with f_s for s <= 1/2,
// eta table above; s = 1 is bitwise build_rho_r
PiecewiseWarpMetric build_lambda_r_s(double r, double s, const TwistIsotopy& isotopy,
                                     const ChartMetric& sigma_N, double margin = 0.1);

// profile-injection variant: same construction with caller-supplied
// transition profiles (the hook negative tests use to break smoothness)
PiecewiseWarpMetric build_lambda_r_with_profiles(double r, const ChartMetric& sigma_N,
                                                 const GluingMap& f,
                                                 std::array<ScalarProfile, 3> deltas,
                                                 double margin);

struct BreakpointReport {
  struct Row {
    double knot = 0.0;
    std::array<double, 3> mismatch{0.0, 0.0, 0.0};  // relative, per order
  };
  std::vector<Row> rows;
  int order = 2;
  std::array<double, 3> tolerance{1e-8, 1e-8, 1e-6};
  bool pass = true;
  double worst(int ord) const;
};

// compares metric components and t-derivatives up to `order` across each
// knot, routing the t = 3 interface through the gluing map; reports, never
// throws
BreakpointReport breakpoint_smoothness(const PiecewiseWarpMetric& m, int order,
                                       std::uint64_t seed = 1234, int samples = 16);

// warp pair of an untwisted branch in the rescaled coordinate T = alpha t
// (unit dT^2 slot), for closed-form curvature term analysis; throws
// FamilyError for the twisted middle branch
std::pair<WarpFunction, WarpFunction> rescaled_warps(const PiecewiseWarpMetric& m,
                                                     int branch);

}  // namespace warpcurv
