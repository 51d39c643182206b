#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "warpcurv/chart_metric.hpp"
#include "warpcurv/profiles.hpp"
#include "warpcurv/rng.hpp"

// Chart regluing diffeomorphisms. A GluingMap acts on the combined factor
// chart (x, u) with the circle coordinate last; the cut-and-reglue interface
// compares metric branches through the pullback J^T g(F(y)) J.

namespace warpcurv {

struct GluingMap {
  int dim = 0;
  bool is_identity = false;
  std::string name;
  std::string support;  // where the map differs from the identity
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> forward, inverse;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  // dual-capable combined evaluation: F(y) into f (dim) and the forward
  // Jacobian into J (dim x dim, row-major); J may be null
  std::function<void(const Dual2*, Dual2*, Dual2*)> forward_dual;
};

// max |F^-1(F(y)) - y| over sampled points
double gluing_roundtrip_residual(const GluingMap& f, const Box& box,
                                 std::uint64_t seed, int samples = 32);
// max |jacobian - central-difference Jacobian of forward|
double gluing_jacobian_residual(const GluingMap& f, const Box& box,
                                std::uint64_t seed, int samples = 32);

struct TwistSpec {
  enum class Kind { identity, rotation, localized };
  Kind kind = Kind::identity;
  int dim = 0;           // chart dimension acted on, circle coordinate last
  double angle = 0.0;    // circle shift (radians)
  Eigen::VectorXd center;  // localized: ball center in the leading coordinates
  double radius = 1.0;     // localized: ball radius
};

TwistSpec::Kind twist_kind_from(const std::string& s);

// identity; rigid circle rotation (an isometry, so the pullback is trivial);
// or a circle rotation by angle * B(|x-c|^2/R^2) with B a normalized bump,
// exactly the identity outside the ball
GluingMap make_twist(const TwistSpec& spec);

// smooth path of twists: at(0) is the base twist, at(1/2) the identity,
// constant near both endpoints (angle scaled by a smooth step in s)
struct TwistIsotopy {
  TwistSpec spec;
  ScalarProfile ramp;  // angle scale over s in [0, 1/2]
  GluingMap at(double s) const;
};

TwistIsotopy make_twist_isotopy(const TwistSpec& spec, double margin = 0.05);

}  // namespace warpcurv
