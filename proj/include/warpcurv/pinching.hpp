#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "warpcurv/chart_metric.hpp"
#include "warpcurv/families.hpp"
#include "warpcurv/parallel.hpp"
#include "warpcurv/warp.hpp"

// Curvature-pinching certification. Every sectional curvature of a doubly
// warped product is a convex combination of five generating terms, so a
// family is pinched into (-1-eps, -1+eps) exactly when all terms are. The
// term checker certifies; random plane sweeps validate the bracketing.

namespace warpcurv {

// alpha-parameterized warp pair phi_i(T) in the rescaled time T = alpha t;
// factor curvatures enter only through worst-case interval bounds
struct WarpFamily {
  std::function<WarpFunction(double)> phi1, phi2;
  double a = 1.0, b = 2.0;  // t-interval, 0 < a < b
  std::array<double, 2> K1_bounds{-1.0, -1.0}, K2_bounds{-1.0, -1.0};
  int dim1 = 2, dim2 = 2;  // a dimension-1 factor contributes no K-term
  std::string name;
};

WarpFamily exp_warp_family(std::array<double, 2> K1_bounds,
                           std::array<double, 2> K2_bounds, double a, double b);
// hyperbolic cross-section under cosh, circle under sinh: every term is -1
WarpFamily cosh_sinh_tube_family(double a, double b);
WarpFamily cosh_cosh_family(std::array<double, 2> K1_bounds,
                            std::array<double, 2> K2_bounds, double a, double b);

// per-slot intervals of the five generating terms over the factor K bounds
struct TermBounds {
  std::array<double, 5> lo{}, hi{};
  std::array<bool, 5> active{true, true, true, true, true};
  double min_active() const;
  double max_active() const;
  // largest |term + 1| over active slots and both endpoints
  double max_deviation() const;
};

TermBounds generating_term_bounds(const WarpFamily& fam, double alpha, double t);

// the five term values with each K-slot at its worst-case bound endpoint
// (largest deviation from -1; ties take the lower endpoint); excluded
// dimension-1 slots are NaN
std::array<double, 5> generating_terms(const WarpFamily& fam, double alpha, double t);

// max over sampled t in [a, b] of TermBounds::max_deviation
double family_max_deviation(const WarpFamily& fam, double alpha, int t_samples = 257);

struct Alpha0Report {
  bool found = false;
  double alpha0 = 0.0;
  double eps = 0.0;
  int t_samples = 257;
  std::vector<double> grid;
  // last failure seen while scanning (the not-found witness)
  double witness_alpha = 0.0, witness_t = 0.0, witness_value = 0.0;
  int witness_term = -1;
};

// smallest grid alpha whose terms stay strictly inside (-1-eps, -1+eps) for
// every sampled t, with the property persisting to the end of the grid
Alpha0Report find_alpha0(const WarpFamily& fam, double eps,
                         const std::vector<double>& alpha_grid, int t_samples = 257);

std::vector<double> linear_grid(double lo, double hi, double step);
std::vector<double> geometric_grid(double lo, double hi, double ratio = 1.1);

struct RangeSpec {
  int points = 100;
  int planes_per_point = 20;
  std::uint64_t seed = 0;
  double knot_exclusion = 0.05;  // piecewise metrics: distance kept from knots
  Exec exec = Exec::parallel;
  std::optional<std::array<double, 2>> target;  // open verdict interval
};

struct PinchReport {
  std::string label;
  double parameter = 0.0;  // set by sweeps (alpha, r, or s)
  double K_min = 0.0, K_max = 0.0;
  Eigen::VectorXd argmin_point, argmax_point;
  bool has_terms = false;
  TermBounds terms;  // extrema of the generating terms over branch samples
  int points = 0, planes_per_point = 0;
  std::uint64_t seed = 0;
  std::optional<std::array<double, 2>> target;
  bool verdict = true;
};

// K extrema over `points` random chart points x `planes_per_point` random
// planes; deterministic in the seed, independent of Exec
PinchReport curvature_range(const ChartMetric& m, const RangeSpec& spec);
// samples avoid the knots; generating-term extrema attached when every
// branch is a warped product with known factor curvature
PinchReport curvature_range(const PiecewiseWarpMetric& m, const RangeSpec& spec);

// every sampled sectional value, ordered by (point, plane); the serial and
// parallel kernels agree bitwise
std::vector<double> curvature_samples(const ChartMetric& m, const RangeSpec& spec);
std::vector<double> curvature_samples(const PiecewiseWarpMetric& m,
                                      const RangeSpec& spec);

// max |K(plane) - K(rescaled plane)| between the alpha^2 dt^2 family chart
// and the unit-rate tube under t -> alpha t
double rescaling_isometry_residual(const ChartMetric& sigma_N, double r,
                                   std::uint64_t seed, int samples = 20);

struct RSweepEntry {
  double r = 0.0;
  double worst_dev = 0.0;  // max over s of max(|K_min+1|, |K_max+1|)
  bool pass = true;
  std::vector<PinchReport> per_s;
};

struct RSweepReport {
  bool found = false;
  double r_star = 0.0;
  double eps = 0.0;
  std::vector<double> s_values;
  std::vector<RSweepEntry> table;
};

// smallest grid r whose curvature range lies in (-1-eps, -1+eps) for every
// requested s, persisting through the rest of the grid
RSweepReport find_min_r(const std::function<PiecewiseWarpMetric(double, double)>& builder,
                        double eps, const std::vector<double>& r_grid,
                        const std::vector<double>& s_values, const RangeSpec& spec);

}  // namespace warpcurv
