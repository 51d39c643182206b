#pragma once

#include <vector>

#include <Eigen/Dense>

#include "warpcurv/chart_metric.hpp"
#include "warpcurv/parallel.hpp"

// Harmonic map heat flow for closed curves gamma: S^1 -> (M, g), sampled at
// theta_k = 2 pi k / N. Samples are stored as unwrapped lifts: the closing
// increment adds winding * axis width on each periodic axis, so the homotopy
// class is pinned by the data and no flow step can change it.

namespace warpcurv {

struct ClosedCurve {
  ChartMetric target;
  Eigen::MatrixXd samples;   // N x dim, unwrapped lifts
  std::vector<int> winding;  // per axis, 0 on non-periodic axes

  int n() const { return static_cast<int>(samples.rows()); }
  double dtheta() const;
  Eigen::VectorXd closure_offset() const;  // winding * axis width per axis
};

// validates dimension agreement, N >= 16, zero winding off periodic axes,
// finite samples, and max sample gap <= 10x mean gap (throws FlowError)
ClosedCurve make_closed_curve(ChartMetric target, Eigen::MatrixXd samples,
                              std::vector<int> winding);

// base + theta/(2 pi) * closure, the straight representative of the class
ClosedCurve straight_loop(const ChartMetric& target, int n, std::vector<int> winding,
                          const Eigen::VectorXd& base);
// straight loop plus amplitude * sin(theta) on one axis
ClosedCurve perturbed_loop(const ChartMetric& target, int n, std::vector<int> winding,
                           const Eigen::VectorXd& base, int axis, double amplitude);

// E = 1/2 sum_k g(gamma_k)(D gamma_k, D gamma_k) / Dtheta, forward D
double energy(const ClosedCurve& c, Exec exec = Exec::parallel);

// tau_k = gamma''_k + Gamma(gamma_k)(gamma'_k, gamma'_k), central differences
Eigen::MatrixXd tension_field(const ClosedCurve& c, Exec exec = Exec::parallel);
double max_tension_norm(const ClosedCurve& c, Exec exec = Exec::parallel);

// largest admissible explicit Euler step, 0.4 (2 pi / N)^2
double cfl_bound(const ClosedCurve& c);

// one explicit Euler step gamma += dt tau; dt beyond the admissible bound is
// rejected (FlowError names the bound), a non-finite state or update throws
// BlowUpError and leaves the curve at its last finite state
void flow_step(ClosedCurve& c, double dt, Exec exec = Exec::parallel);

enum class FlowStatus { converged, max_steps, blow_up };
const char* to_string(FlowStatus s);

struct FlowParams {
  double dt = 0.0;  // <= 0: use cfl_bound
  long max_steps = 200000;
  double tol = 1e-6;  // converged when max_k |tau_k| <= tol
  int record_every = 100;
  Exec exec = Exec::parallel;
};

struct FlowTrace {
  struct Row {
    long step = 0;
    double energy = 0.0;
    double tension_max = 0.0;
  };
  std::vector<Row> rows;
};

struct FlowResult {
  FlowStatus status = FlowStatus::max_steps;
  long steps = 0;
  double final_energy = 0.0;
  double final_tension = 0.0;
  FlowTrace trace;
};

// flows until the tension norm drops to tol. Discrete energy must never
// rise by more than 1e-12 relative per step (FlowError otherwise); a
// non-finite update ends the run with status blow_up instead of throwing.
FlowResult flow_until(ClosedCurve& c, const FlowParams& p);

}  // namespace warpcurv
