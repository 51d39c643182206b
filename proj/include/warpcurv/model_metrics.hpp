#pragma once

#include "warpcurv/chart_metric.hpp"

// Closed-form test charts. All are dual-capable; constant_curvature is set
// where the model has one, so sweeps can source factor curvatures analytically.

namespace warpcurv {

ChartMetric euclidean(int n, double half_width = 3.0);

// 1-D flat circle of the given circumference, the canonical S^1 chart
ChartMetric circle(double period = 2.0 * M_PI);

// flat square torus, both axes periodic with the given periods
ChartMetric flat_torus(double period1 = 2.0 * M_PI, double period2 = 2.0 * M_PI);

// diag(1, x1^2): plane in polar coordinates, x2 the angle
ChartMetric polar_plane();

// diag(1, sin^2 x1): unit round sphere, x2 the longitude
ChartMetric round_sphere();

// diag(1, 1, ..., 1)/x_n^2: hyperbolic half-space model, curvature -1
ChartMetric hyperbolic_half_plane();
ChartMetric hyperbolic_half_space(int n);

// cosh^2(x2) dx1^2 + dx2^2: hyperbolic surface closed in x1, curvature -1.
// Serves as the compact-hyperbolic-factor chart and as a heat-flow target
// (core closed geodesic at x2 = 0).
ChartMetric hyperbolic_cylinder(double x2_half_width = 1.5);

// (1 + amp sin x1) dx1^2 + dx2^2 on the torus: flow target whose closed
// geodesics have genuinely non-affine parameterizations
ChartMetric bumpy_torus(double amp = 0.3);

// strip the dual evaluator so derivatives go through central differences
ChartMetric as_blackbox(const ChartMetric& m, double central_step = 1e-5);

}  // namespace warpcurv
