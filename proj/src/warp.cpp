#include "warpcurv/warp.hpp"

#include <algorithm>
#include <cmath>

namespace warpcurv {

WarpFunction warp_exp() {
  auto e = [](double t) { return std::exp(t); };
  return {e, e, e, -10.0, 10.0, "exp"};
}

WarpFunction warp_cosh() {
  return {[](double t) { return std::cosh(t); }, [](double t) { return std::sinh(t); },
          [](double t) { return std::cosh(t); }, -10.0, 10.0, "cosh"};
}

WarpFunction warp_sinh() {
  return {[](double t) { return std::sinh(t); }, [](double t) { return std::cosh(t); },
          [](double t) { return std::sinh(t); }, 1e-6, 10.0, "sinh"};
}

WarpFunction warp_const(double c) {
  if (!(c > 0.0)) throw Error("warp_const: scale must be positive");
  return {[c](double) { return c; }, [](double) { return 0.0; },
          [](double) { return 0.0; }, -1e9, 1e9, "const"};
}

WarpFunction warp_two_plus_sin() {
  return {[](double t) { return 2.0 + std::sin(t); }, [](double t) { return std::cos(t); },
          [](double t) { return -std::sin(t); }, -1e9, 1e9, "two-plus-sin"};
}

WarpFunction warp_scaled(const WarpFunction& w, double alpha) {
  WarpFunction out;
  out.value = [w, alpha](double t) { return w.value(alpha * t); };
  out.d1 = [w, alpha](double t) { return alpha * w.d1(alpha * t); };
  out.d2 = [w, alpha](double t) { return alpha * alpha * w.d2(alpha * t); };
  out.t_lo = w.t_lo / alpha;
  out.t_hi = w.t_hi / alpha;
  out.name = w.name + "-scaled";
  return out;
}

double warp_derivative_residual(const WarpFunction& w, double t_lo, double t_hi,
                                int samples) {
  double worst = 0.0;
  const double h = 1e-5;
  for (int i = 0; i <= samples; ++i) {
    double t = t_lo + (t_hi - t_lo) * i / samples;
    double cd1 = (w.value(t + h) - w.value(t - h)) / (2 * h);
    double cd2 = (w.value(t + h) - 2 * w.value(t) + w.value(t - h)) / (h * h);
    double scale = std::max(1.0, std::abs(w.value(t)));
    worst = std::max(worst, std::abs(cd1 - w.d1(t)) / scale);
    worst = std::max(worst, std::abs(cd2 - w.d2(t)) / scale);
  }
  return worst;
}

namespace {
double dot0(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() ? a.dot(b) : 0.0;
}
double sq(const Eigen::VectorXd& a) { return dot0(a, a); }
}  // namespace

double frame_residual(const DoublyWarpedFrame& f) {
  double r1 = std::abs(f.s * f.s + sq(f.u1) + sq(f.v1) - 1.0);
  double r2 = std::abs(sq(f.u2) + sq(f.v2) - 1.0);
  double r3 = std::abs(dot0(f.u1, f.u2) + dot0(f.v1, f.v2));
  return std::max({r1, r2, r3});
}

DoublyWarpedFrame orthonormalized(DoublyWarpedFrame f) {
  double res = frame_residual(f);
  if (res > 1e-10)
    throw FrameError("frame orthonormality residual " + std::to_string(res) +
                     " exceeds 1e-10");
  // b = u2 + v2 (no dt part): normalize, then project out of a and normalize a
  double nb = std::sqrt(sq(f.u2) + sq(f.v2));
  if (f.u2.size()) f.u2 /= nb;
  if (f.v2.size()) f.v2 /= nb;
  double ab = dot0(f.u1, f.u2) + dot0(f.v1, f.v2);
  if (f.u1.size()) f.u1 -= ab * f.u2;
  if (f.v1.size()) f.v1 -= ab * f.v2;
  double na = std::sqrt(f.s * f.s + sq(f.u1) + sq(f.v1));
  f.s /= na;
  if (f.u1.size()) f.u1 /= na;
  if (f.v1.size()) f.v1 /= na;
  return f;
}

std::array<double, 5> convex_weights(const DoublyWarpedFrame& f) {
  double A = sq(f.u1), B = sq(f.v1), C = sq(f.u2), D = sq(f.v2);
  double p = dot0(f.u1, f.u2), q = dot0(f.v1, f.v2);
  std::array<double, 5> w;
  w[0] = f.s * f.s * C;
  w[1] = f.s * f.s * D;
  w[2] = (f.u1.size() < 2) ? 0.0 : A * C - p * p;
  w[3] = (f.v1.size() < 2) ? 0.0 : B * D - q * q;
  w[4] = A * D + B * C - 2.0 * p * q;
  return w;
}

std::array<double, 5> warp_terms(const WarpFunction& phi1, const WarpFunction& phi2,
                                 double t, double K1, double K2) {
  double f1 = phi1.value(t), f2 = phi2.value(t);
  if (!(f1 > 0.0) || !(f2 > 0.0))
    throw Error("warp_terms: warp function not positive at t = " + std::to_string(t));
  double f1p = phi1.d1(t), f2p = phi2.d1(t);
  return {-phi1.d2(t) / f1, -phi2.d2(t) / f2, (K1 - f1p * f1p) / (f1 * f1),
          (K2 - f2p * f2p) / (f2 * f2), -(f1p * f2p) / (f1 * f2)};
}

double doubly_warped_K(const WarpFunction& phi1, const WarpFunction& phi2, double t,
                       const DoublyWarpedFrame& frame) {
  DoublyWarpedFrame f = orthonormalized(frame);
  std::array<double, 5> w = convex_weights(f);
  // degenerate factor pairs contribute weight 0; never read their K
  std::array<double, 5> T = warp_terms(phi1, phi2, t, (w[2] > 1e-12) ? f.K1 : 0.0,
                                       (w[3] > 1e-12) ? f.K2 : 0.0);
  double K = 0.0;
  for (int i = 0; i < 5; ++i) {
    if ((i == 2 && w[2] <= 1e-12) || (i == 3 && w[3] <= 1e-12)) continue;
    K += w[i] * T[i];
  }
  return K;
}

double single_warp_K(const WarpFunction& phi, double t, double s,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& v, double K_sigma) {
  double r1 = std::abs(s * s + sq(u) - 1.0);
  double r2 = std::abs(sq(v) - 1.0);
  double r3 = std::abs(dot0(u, v));
  if (std::max({r1, r2, r3}) > 1e-10)
    throw FrameError("single_warp_K: frame constraints violated");
  double f = phi.value(t);
  if (!(f > 0.0))
    throw Error("single_warp_K: warp function not positive at t = " + std::to_string(t));
  double fp = phi.d1(t);
  return -(phi.d2(t) / f) * s * s + ((K_sigma - fp * fp) / (f * f)) * sq(u);
}

// ---- connection ----------------------------------------------------------

namespace {

Eigen::VectorXd product_vector(int d1, int d2, const Eigen::VectorXd& b1,
                               const Eigen::VectorXd& b2, double bt) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d1 + d2 + 1);
  if (b1.size()) out.head(d1) = b1;
  if (b2.size()) out.segment(d1, d2) = b2;
  out[d1 + d2] = bt;
  return out;
}

// Gamma^k_ij u^i w^j on a factor chart (constant-component fields)
Eigen::VectorXd factor_nabla(const ChartMetric& sigma, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  Christoffels G = christoffel_at(sigma, x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sigma.dim);
  for (int k = 0; k < sigma.dim; ++k)
    for (int i = 0; i < sigma.dim; ++i)
      for (int j = 0; j < sigma.dim; ++j) out[k] += G.at(k, i, j) * u[i] * w[j];
  return out;
}

}  // namespace

Eigen::VectorXd warped_connection_term(const WarpContext& ctx, const TaggedVector& X,
                                       const TaggedVector& Y) {
  const int d1 = ctx.sigma1->dim, d2 = ctx.sigma2->dim;
  const double t = ctx.t;
  const double f1 = ctx.phi1.value(t), f2 = ctx.phi2.value(t);
  const double r1 = ctx.phi1.d1(t) / f1, r2 = ctx.phi2.d1(t) / f2;
  const Eigen::VectorXd none;

  auto tag2 = [](VecTag a, VecTag b) { return static_cast<int>(a) * 3 + static_cast<int>(b); };
  switch (tag2(X.tag, Y.tag)) {
    case 0:  // D_dt dt = 0
      return product_vector(d1, d2, none, none, 0.0);
    case 1:  // D_dt u = (phi1'/phi1) u
    case 3:  // D_u dt, same by symmetry
    {
      const TaggedVector& u = (X.tag == VecTag::factor1) ? X : Y;
      return product_vector(d1, d2, r1 * u.comp, none, 0.0);
    }
    case 2:  // D_dt v = (phi2'/phi2) v
    case 6: {
      const TaggedVector& v = (X.tag == VecTag::factor2) ? X : Y;
      return product_vector(d1, d2, none, r2 * v.comp, 0.0);
    }
    case 4: {  // D_u1 u2 = -(phi1'/phi1) <u1,u2>_rho dt + factor-1 nabla
      double inner_rho = f1 * f1 * X.comp.dot(ctx.sigma1->components(ctx.x1) * Y.comp);
      Eigen::VectorXd tangential = factor_nabla(*ctx.sigma1, ctx.x1, X.comp, Y.comp);
      return product_vector(d1, d2, tangential, none, -r1 * inner_rho);
    }
    case 8: {  // D_v1 v2
      double inner_rho = f2 * f2 * X.comp.dot(ctx.sigma2->components(ctx.x2) * Y.comp);
      Eigen::VectorXd tangential = factor_nabla(*ctx.sigma2, ctx.x2, X.comp, Y.comp);
      return product_vector(d1, d2, none, tangential, -r2 * inner_rho);
    }
    case 5:  // D_u v = 0 = D_v u
    case 7:
      return product_vector(d1, d2, none, none, 0.0);
  }
  throw Error("warped_connection_term: unknown tag combination");
}

TwoFormTag two_form_tag_from(const std::string& s) {
  if (s == "dt^u") return TwoFormTag::dt_u;
  if (s == "dt^v") return TwoFormTag::dt_v;
  if (s == "u^v") return TwoFormTag::u_v;
  if (s == "u^u") return TwoFormTag::u_u;
  if (s == "v^v") return TwoFormTag::v_v;
  throw Error("unknown 2-form tag: " + s);
}

double warped_curvature_image(const WarpFunction& phi1, const WarpFunction& phi2,
                              double t, TwoFormTag tag, double factor_K) {
  double f1 = phi1.value(t), f2 = phi2.value(t);
  double f1p = phi1.d1(t), f2p = phi2.d1(t);
  switch (tag) {
    case TwoFormTag::dt_u:
      return -phi1.d2(t) / f1;
    case TwoFormTag::dt_v:
      return -phi2.d2(t) / f2;
    case TwoFormTag::u_v:
      return -(f1p * f2p) / (f1 * f2);
    case TwoFormTag::u_u:
      return (factor_K - f1p * f1p) / (f1 * f1);
    case TwoFormTag::v_v:
      return (factor_K - f2p * f2p) / (f2 * f2);
  }
  throw Error("warped_curvature_image: unknown tag");
}

// ---- assembly ------------------------------------------------------------

namespace {

// shared component functor so every assembled metric uses identical expressions
struct DoublyWarpedEval {
  ChartMetric s1, s2;
  WarpFunction phi1, phi2;
  int d1, d2, n;

  template <class S>
  void operator()(const S* x, S* g) const {
    for (int i = 0; i < n * n; ++i) g[i] = S(0.0);
    S f1 = phi1.eval(x[d1 + d2]);
    S f2 = phi2.eval(x[d1 + d2]);
    std::vector<S> block(static_cast<size_t>(std::max(d1, d2)) * std::max(d1, d2));
    if constexpr (std::is_same_v<S, double>) {
      s1.eval(x, block.data());
    } else {
      s1.eval_dual(x, block.data());
    }
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) g[i * n + j] = f1 * f1 * block[i * d1 + j];
    if constexpr (std::is_same_v<S, double>) {
      s2.eval(x + d1, block.data());
    } else {
      s2.eval_dual(x + d1, block.data());
    }
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d2; ++j) g[(d1 + i) * n + (d1 + j)] = f2 * f2 * block[i * d2 + j];
    g[(n - 1) * n + (n - 1)] = S(1.0);
  }
};

}  // namespace

ChartMetric assemble_doubly_warped(const ChartMetric& sigma1, const ChartMetric& sigma2,
                                   const WarpFunction& phi1, const WarpFunction& phi2,
                                   double t_lo, double t_hi) {
  if (!sigma1.eval_dual || !sigma2.eval_dual)
    throw Error("assemble_doubly_warped: factor charts must be dual-capable");
  Box box;
  box.axes = sigma1.domain.axes;
  box.axes.insert(box.axes.end(), sigma2.domain.axes.begin(), sigma2.domain.axes.end());
  box.axes.push_back(Axis{t_lo, t_hi, false});
  DoublyWarpedEval f{sigma1, sigma2, phi1, phi2,
                     sigma1.dim, sigma2.dim, sigma1.dim + sigma2.dim + 1};
  return make_chart_metric(f.n, box,
                           "warped(" + sigma1.name + "," + sigma2.name + ";" +
                               phi1.name + "," + phi2.name + ")",
                           f);
}

ChartMetric assemble_single_warp(const ChartMetric& sigma, const WarpFunction& phi,
                                 double t_lo, double t_hi) {
  if (!sigma.eval_dual)
    throw Error("assemble_single_warp: factor chart must be dual-capable");
  Box box = sigma.domain;
  box.axes.push_back(Axis{t_lo, t_hi, false});
  const int d = sigma.dim, n = d + 1;
  ChartMetric s = sigma;
  WarpFunction w = phi;
  auto f = [s, w, d, n](const auto* x, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    for (int i = 0; i < n * n; ++i) g[i] = S(0.0);
    S fv = w.eval(x[d]);
    std::vector<S> block(static_cast<size_t>(d) * d);
    if constexpr (std::is_same_v<S, double>) {
      s.eval(x, block.data());
    } else {
      s.eval_dual(x, block.data());
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g[i * n + j] = fv * fv * block[i * d + j];
    g[(n - 1) * n + (n - 1)] = S(1.0);
  };
  return make_chart_metric(n, box, "warped(" + sigma.name + ";" + w.name + ")", f);
}

DoublyWarpedFrame random_frame(Rng& rng, int d1, int d2) {
  DoublyWarpedFrame f;
  // raw gaussian a (with dt slot) and b (without), then constrain
  Eigen::VectorXd a(d1 + d2 + 1), b(d1 + d2 + 1);
  for (int i = 0; i < a.size(); ++i) a[i] = rng.normal();
  for (int i = 0; i < b.size(); ++i) b[i] = rng.normal();
  b[d1 + d2] = 0.0;
  b /= b.norm();
  a -= a.dot(b) * b;
  a /= a.norm();
  f.u1 = a.head(d1);
  f.v1 = a.segment(d1, d2);
  f.s = a[d1 + d2];
  f.u2 = b.head(d1);
  f.v2 = b.segment(d1, d2);
  return f;
}

TangentPlane frame_to_chart_plane(const WarpContext& ctx, const DoublyWarpedFrame& f) {
  const int d1 = ctx.sigma1->dim, d2 = ctx.sigma2->dim;
  double f1 = ctx.phi1.value(ctx.t), f2 = ctx.phi2.value(ctx.t);
  Eigen::MatrixXd L1 = ctx.sigma1->components(ctx.x1).llt().matrixL();
  Eigen::MatrixXd L2 = ctx.sigma2->components(ctx.x2).llt().matrixL();
  auto lift1 = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return L1.transpose().triangularView<Eigen::Upper>().solve(w) / f1;
  };
  auto lift2v = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return L2.transpose().triangularView<Eigen::Upper>().solve(w) / f2;
  };
  TangentPlane p;
  p.point.resize(d1 + d2 + 1);
  p.point << ctx.x1, ctx.x2, ctx.t;
  p.a.setZero(d1 + d2 + 1);
  p.b.setZero(d1 + d2 + 1);
  p.a.head(d1) = lift1(f.u1);
  p.a.segment(d1, d2) = lift2v(f.v1);
  p.a[d1 + d2] = f.s;
  p.b.head(d1) = lift1(f.u2);
  p.b.segment(d1, d2) = lift2v(f.v2);
  return p;
}

}  // namespace warpcurv
