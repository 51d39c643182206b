#include "warpcurv/gluing.hpp"

#include <cmath>

#include "warpcurv/errors.hpp"

namespace warpcurv {

namespace {

// bump B(q) = exp(1 - 1/(1-q)) on [0,1): B(0) = 1, identically 0 for q >= 1.
// The cutoff sits in the exp underflow zone so the clamp is exact.
template <class S>
S ball_bump(const S& q) {
  if (value_of(q) >= 1.0 - 1.0 / 690.0) return S(0.0);
  return exp(1.0 - 1.0 / (1.0 - q));
}

template <class S>
S ball_bump_d(const S& q) {  // dB/dq = -B / (1-q)^2
  if (value_of(q) >= 1.0 - 1.0 / 690.0) return S(0.0);
  S om = 1.0 - q;
  return exp(1.0 - 1.0 / om) * (-1.0) / (om * om);
}

// y -> F(y) and row-major Jacobian; J may be null
template <class S>
void twist_apply(const TwistSpec& spec, const S* y, S* out, S* J) {
  const int n = spec.dim;
  for (int i = 0; i < n; ++i) out[i] = y[i];
  if (J) {
    for (int i = 0; i < n * n; ++i) J[i] = S(0.0);
    for (int i = 0; i < n; ++i) J[i * n + i] = S(1.0);
  }
  switch (spec.kind) {
    case TwistSpec::Kind::identity:
      return;
    case TwistSpec::Kind::rotation:
      out[n - 1] = out[n - 1] + spec.angle;
      return;
    case TwistSpec::Kind::localized: {
      S q(0.0);
      for (int i = 0; i < n - 1; ++i) {
        S d = y[i] - spec.center[i];
        q = q + d * d;
      }
      q = q / (spec.radius * spec.radius);
      out[n - 1] = out[n - 1] + spec.angle * ball_bump(q);
      if (J) {
        S bp = ball_bump_d(q);
        for (int i = 0; i < n - 1; ++i)
          J[(n - 1) * n + i] =
              spec.angle * bp * 2.0 * (y[i] - spec.center[i]) / (spec.radius * spec.radius);
      }
      return;
    }
  }
  throw Error("twist_apply: unknown twist kind");
}

std::string describe_support(const TwistSpec& spec) {
  switch (spec.kind) {
    case TwistSpec::Kind::identity:
      return "empty";
    case TwistSpec::Kind::rotation:
      return "everywhere (isometric rotation)";
    case TwistSpec::Kind::localized: {
      std::string c = "(";
      for (int i = 0; i < spec.center.size(); ++i)
        c += (i ? ", " : "") + std::to_string(spec.center[i]);
      return "ball of radius " + std::to_string(spec.radius) + " about " + c + ")";
    }
  }
  return "?";
}

}  // namespace

TwistSpec::Kind twist_kind_from(const std::string& s) {
  if (s == "identity") return TwistSpec::Kind::identity;
  if (s == "rotation") return TwistSpec::Kind::rotation;
  if (s == "localized") return TwistSpec::Kind::localized;
  throw Error("unknown twist kind: " + s);
}

GluingMap make_twist(const TwistSpec& spec) {
  if (spec.dim < 2) throw Error("make_twist: need at least one leading coordinate");
  if (spec.kind == TwistSpec::Kind::localized) {
    if (spec.center.size() != spec.dim - 1)
      throw Error("make_twist: center must have dim-1 coordinates");
    if (!(spec.radius > 0.0)) throw Error("make_twist: radius must be positive");
  }
  GluingMap g;
  g.dim = spec.dim;
  g.is_identity = spec.kind == TwistSpec::Kind::identity || spec.angle == 0.0;
  g.name = spec.kind == TwistSpec::Kind::identity
               ? "identity"
               : (spec.kind == TwistSpec::Kind::rotation ? "rotation" : "localized");
  g.support = describe_support(spec);
  g.forward = [spec](const Eigen::VectorXd& y) {
    Eigen::VectorXd out(spec.dim);
    twist_apply<double>(spec, y.data(), out.data(), nullptr);
    return out;
  };
  TwistSpec inv = spec;
  inv.angle = -spec.angle;
  g.inverse = [inv](const Eigen::VectorXd& y) {
    Eigen::VectorXd out(inv.dim);
    twist_apply<double>(inv, y.data(), out.data(), nullptr);
    return out;
  };
  g.jacobian = [spec](const Eigen::VectorXd& y) {
    Eigen::VectorXd out(spec.dim);
    std::vector<double> J(static_cast<size_t>(spec.dim) * spec.dim);
    twist_apply<double>(spec, y.data(), out.data(), J.data());
    Eigen::MatrixXd M(spec.dim, spec.dim);
    for (int i = 0; i < spec.dim; ++i)
      for (int j = 0; j < spec.dim; ++j) M(i, j) = J[i * spec.dim + j];
    return M;
  };
  g.forward_dual = [spec](const Dual2* y, Dual2* f, Dual2* J) {
    twist_apply<Dual2>(spec, y, f, J);
  };
  return g;
}

double gluing_roundtrip_residual(const GluingMap& f, const Box& box,
                                 std::uint64_t seed, int samples) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd y = sample_point(box, rng);
    Eigen::VectorXd back = f.inverse(f.forward(y));
    worst = std::max(worst, (back - y).cwiseAbs().maxCoeff());
  }
  return worst;
}

double gluing_jacobian_residual(const GluingMap& f, const Box& box,
                                std::uint64_t seed, int samples) {
  Rng rng(seed);
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd y = sample_point(box, rng);
    Eigen::MatrixXd J = f.jacobian(y);
    for (int j = 0; j < f.dim; ++j) {
      Eigen::VectorXd yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      Eigen::VectorXd col = (f.forward(yp) - f.forward(ym)) / (2 * h);
      worst = std::max(worst, (col - J.col(j)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

GluingMap TwistIsotopy::at(double s) const {
  if (s < 0.0 || s > 0.5)
    throw Error("twist isotopy parameter outside [0, 1/2]: " + std::to_string(s));
  TwistSpec scaled = spec;
  scaled.angle = spec.angle * ramp.value(s);
  return make_twist(scaled);
}

TwistIsotopy make_twist_isotopy(const TwistSpec& spec, double margin) {
  TwistIsotopy iso;
  iso.spec = spec;
  iso.ramp = smooth_step(0.0, 0.5, 1.0, 0.0, margin);
  return iso;
}

}  // namespace warpcurv
