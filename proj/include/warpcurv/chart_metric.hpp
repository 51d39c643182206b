#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warpcurv/dual.hpp"
#include "warpcurv/errors.hpp"
#include "warpcurv/rng.hpp"

namespace warpcurv {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
  double width() const { return hi - lo; }
};

struct Box {
  std::vector<Axis> axes;
  int dim() const { return static_cast<int>(axes.size()); }
  // periodic axes always contain; non-periodic require lo+pad <= x <= hi-pad
  bool contains(const Eigen::VectorXd& x, double pad = 0.0) const;
};

enum class DerivScheme { forward, central };

// g is written row-major, full symmetric n*n
using EvalFn = std::function<void(const double*, double*)>;
using EvalDualFn = std::function<void(const Dual2*, Dual2*)>;

// A Riemannian metric in a single coordinate chart. Components are smooth on
// the box; periodic axes identify x and x + width. The dual evaluator drives
// exact forward-mode derivatives; when absent the scheme falls back to central
// differences with step max(central_step, |x_a| * 1e-7) per axis.
struct ChartMetric {
  int dim = 0;
  Box domain;
  DerivScheme scheme = DerivScheme::forward;
  double central_step = 1e-5;
  EvalFn eval;
  EvalDualFn eval_dual;
  std::optional<double> constant_curvature;  // set on model spaces, for oracles
  std::string name;

  Eigen::MatrixXd components(const Eigen::VectorXd& x) const;
  void require_inside(const Eigen::VectorXd& x) const;
};

// wrap a functor callable as f(const S* x, S* g) for S in {double, Dual2}
template <class F>
ChartMetric make_chart_metric(int dim, Box box, std::string name, F f,
                              DerivScheme scheme = DerivScheme::forward) {
  ChartMetric m;
  m.dim = dim;
  m.domain = std::move(box);
  m.scheme = scheme;
  m.name = std::move(name);
  m.eval = [f](const double* x, double* g) { f(x, g); };
  m.eval_dual = [f](const Dual2* x, Dual2* g) { f(x, g); };
  return m;
}

// black-box variant: double evaluation only, derivatives via central differences
ChartMetric make_blackbox_metric(int dim, Box box, std::string name, EvalFn eval,
                                 double central_step = 1e-5);

struct MetricJet1 {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg;  // dg[a](i,j) = d_a g_ij
};

struct MetricJet2 : MetricJet1 {
  std::vector<std::vector<Eigen::MatrixXd>> ddg;  // ddg[a][b](i,j) = d_a d_b g_ij
};

MetricJet1 metric_jet1(const ChartMetric& m, const Eigen::VectorXd& x);
MetricJet2 metric_jet2(const ChartMetric& m, const Eigen::VectorXd& x);

// uniform point in the box; non-periodic axes stay pad_frac * width away from
// the walls (central-difference stencils need interior room)
Eigen::VectorXd sample_point(const Box& box, Rng& rng, double pad_frac = 0.02);

// max over sampled points/axes of |g(x) - g(x + width e_a)| on periodic axes
double periodicity_residual(const ChartMetric& m, Rng& rng, int npoints = 16);

}  // namespace warpcurv
