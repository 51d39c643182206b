#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <string>

#include "warpcurv/chart_metric.hpp"
#include "warpcurv/rng.hpp"
#include "warpcurv/tensor_engine.hpp"

// Closed-form curvature of doubly warped products
//   rho = phi1(t)^2 sigma1 + phi2(t)^2 sigma2 + dt^2.
// Frames are stored in rho-orthonormal coordinates of the factor blocks, so
// every norm and inner product below is a plain Euclidean dot product; K1/K2
// are the sigma-intrinsic sectional curvatures of the projected factor pairs.

namespace warpcurv {

struct WarpFunction {
  std::function<double(double)> value, d1, d2;
  double t_lo = 0.0, t_hi = 1.0;  // positivity window
  std::string name;

  template <class S>
  S eval(const S& t) const {
    double t0 = value_of(t);
    return lift_c2(value(t0), d1(t0), d2(t0), t);
  }
};

WarpFunction warp_exp();                       // e^t on (-inf, inf)
WarpFunction warp_cosh();                      // cosh t
WarpFunction warp_sinh();                      // sinh t on (0, inf)
WarpFunction warp_const(double c);             // c > 0
WarpFunction warp_two_plus_sin();              // 2 + sin t
WarpFunction warp_scaled(const WarpFunction& w, double alpha);  // t -> w(alpha t)

// max relative inconsistency of d1/d2 against central differences of value
double warp_derivative_residual(const WarpFunction& w, double t_lo, double t_hi,
                                int samples = 64);

// Orthonormal 2-plane data: the plane is spanned by {u1 + v1 + s dt, u2 + v2}
// with s^2 + |u1|^2 + |v1|^2 = 1, |u2|^2 + |v2|^2 = 1, <u1,u2> + <v1,v2> = 0.
struct DoublyWarpedFrame {
  Eigen::VectorXd u1, u2;  // factor-1 components, rho-orthonormal coordinates
  Eigen::VectorXd v1, v2;  // factor-2 components
  double s = 0.0;
  double K1 = 0.0, K2 = 0.0;  // sigma-intrinsic curvature of the projected pairs
};

// max violation of the three orthonormality constraints
double frame_residual(const DoublyWarpedFrame& f);
// Gram-Schmidt cleanup of drift <= 1e-10; larger residuals throw FrameError
DoublyWarpedFrame orthonormalized(DoublyWarpedFrame f);

// (s^2|u2|^2, s^2|v2|^2, |u1|^2|u2|^2 - <u1,u2>^2, |v1|^2|v2|^2 - <v1,v2>^2,
//  |u1|^2|v2|^2 + |v1|^2|u2|^2 - 2<u1,u2><v1,v2>); sums to 1 on admissible
// frames; a dimension-1 factor gets an exact 0 in its K-slot
std::array<double, 5> convex_weights(const DoublyWarpedFrame& f);

// the five per-plane curvature values the weights combine
std::array<double, 5> warp_terms(const WarpFunction& phi1, const WarpFunction& phi2,
                                 double t, double K1, double K2);

double doubly_warped_K(const WarpFunction& phi1, const WarpFunction& phi2, double t,
                       const DoublyWarpedFrame& frame);

// single warp phi^2 sigma + dt^2, plane {u + s dt, v},
// s^2 + |u|^2 = 1, |v| = 1, <u,v> = 0
double single_warp_K(const WarpFunction& phi, double t, double s,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& v, double K_sigma);

// ---- connection and curvature-operator structure ------------------------

enum class VecTag { radial, factor1, factor2 };  // dt, u, v

struct TaggedVector {
  VecTag tag = VecTag::radial;
  Eigen::VectorXd comp;  // factor chart components; empty for radial
};

struct WarpContext {
  const ChartMetric* sigma1 = nullptr;
  const ChartMetric* sigma2 = nullptr;
  WarpFunction phi1, phi2;
  Eigen::VectorXd x1, x2;
  double t = 0.0;
};

// covariant derivative of constant-component fields, returned in product-chart
// coordinates (dim1 + dim2 + 1, t slot last)
Eigen::VectorXd warped_connection_term(const WarpContext& ctx, const TaggedVector& X,
                                       const TaggedVector& Y);

enum class TwoFormTag { dt_u, dt_v, u_v, u_u, v_v };
TwoFormTag two_form_tag_from(const std::string& s);

// Eigen-coefficient of the curvature operator on the tagged 2-form type.
// factor_K is the sigma-intrinsic eigenvalue of the factor operator on that
// 2-form (only read for u_u / v_v).
double warped_curvature_image(const WarpFunction& phi1, const WarpFunction& phi2,
                              double t, TwoFormTag tag, double factor_K = 0.0);

// ---- assembly ------------------------------------------------------------

ChartMetric assemble_doubly_warped(const ChartMetric& sigma1, const ChartMetric& sigma2,
                                   const WarpFunction& phi1, const WarpFunction& phi2,
                                   double t_lo, double t_hi);
ChartMetric assemble_single_warp(const ChartMetric& sigma, const WarpFunction& phi,
                                 double t_lo, double t_hi);

// random admissible frame (d1, d2 factor dimensions)
DoublyWarpedFrame random_frame(Rng& rng, int d1, int d2);

// Chart-coordinate plane matching a frame at (x1, x2, t) on the assembled
// metric. Block k maps rho-orthonormal coordinates through (1/phi_k) L_k^-T
// where sigma_k(x_k) = L_k L_k^T.
TangentPlane frame_to_chart_plane(const WarpContext& ctx, const DoublyWarpedFrame& f);

}  // namespace warpcurv
