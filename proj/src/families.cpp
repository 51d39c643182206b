#include "warpcurv/families.hpp"

#include <cmath>

#include "warpcurv/errors.hpp"
#include "warpcurv/model_metrics.hpp"

namespace warpcurv {

std::array<ScalarProfile, 3> delta_profiles(double margin) {
  if (!(margin > 0.0) || !(margin < 0.5))
    throw ProfileError("delta_profiles: margin must lie in (0, 1/2)");
  return {smooth_step(2.0, 3.0, -1.0, 1.0, margin),
          smooth_step(3.0, 4.0, 0.0, 1.0, margin),
          smooth_step(4.0, 5.0, 1.0, -1.0, margin)};
}

ScalarProfile eta_profile(double margin) {
  if (!(margin > 0.0) || !(margin < 0.25))
    throw ProfileError("eta_profile: margin must lie in (0, 1/4)");
  return smooth_step(0.5, 1.0, 1.0, 0.0, margin);
}

namespace {

// One evaluator serves the tube, the rescaled tube, and every family table.
// Shared expressions keep members that should coincide bitwise identical.
struct FamilyEval {
  double alpha = 1.0;
  double tcoef = 1.0;  // dt^2 coefficient
  ChartMetric sN, sC;
  std::array<ScalarProfile, 3> del{};
  GluingMap glu;
  std::optional<double> eta;
  int dN = 0, n = 0;
  int fixed_branch = 0;  // 0: dispatch on t
  bool rho_only = false;

  static int pick(double t) {
    if (t < 2.0) return 1;
    if (t < 3.0) return 2;
    if (t < 4.0) return 3;
    if (t < 5.0) return 4;
    return 5;
  }

  template <class S>
  void blocks_at(const S* y, S* bN, S* bC) const {
    if constexpr (std::is_same_v<S, double>) {
      sN.eval(y, bN);
      sC.eval(y + dN, bC);
    } else {
      sN.eval_dual(y, bN);
      sC.eval_dual(y + dN, bC);
    }
  }

  template <class S>
  void operator()(const S* x, S* g) const {
    const int m = n - 1;  // factor block size
    for (int i = 0; i < n * n; ++i) g[i] = S(0.0);
    S t = x[n - 1];
    S at = alpha * t;
    S ep = exp(at), em = exp(-at);
    S c = 0.5 * (ep + em);
    g[(n - 1) * n + (n - 1)] = S(tcoef);

    const int b = rho_only ? 1 : (fixed_branch ? fixed_branch : pick(value_of(t)));
    std::vector<S> bN(static_cast<size_t>(dN) * dN), bC(1);
    blocks_at(x, bN.data(), bC.data());

    if (b == 3 && !eta && !glu.is_identity) {
      // c^2 [ (1 - d2) J^T h(F(y)) J  +  d2 h(y) ]
      S mix = del[1].eval(t);
      std::vector<S> F(m), J(static_cast<size_t>(m) * m);
      if constexpr (std::is_same_v<S, double>) {
        Eigen::VectorXd y(m);
        for (int i = 0; i < m; ++i) y[i] = x[i];
        Eigen::VectorXd Fy = glu.forward(y);
        Eigen::MatrixXd Jy = glu.jacobian(y);
        for (int i = 0; i < m; ++i) F[i] = Fy[i];
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) J[i * m + j] = Jy(i, j);
      } else {
        glu.forward_dual(x, F.data(), J.data());
      }
      std::vector<S> bNF(static_cast<size_t>(dN) * dN), bCF(1);
      blocks_at(F.data(), bNF.data(), bCF.data());
      std::vector<S> hF(static_cast<size_t>(m) * m, S(0.0)),
          h(static_cast<size_t>(m) * m, S(0.0));
      for (int i = 0; i < dN; ++i)
        for (int j = 0; j < dN; ++j) {
          hF[i * m + j] = bNF[i * dN + j];
          h[i * m + j] = bN[i * dN + j];
        }
      hF[dN * m + dN] = bCF[0];
      h[dN * m + dN] = bC[0];
      std::vector<S> tmp(static_cast<size_t>(m) * m, S(0.0)),
          pull(static_cast<size_t>(m) * m, S(0.0));
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
          for (int j = 0; j < m; ++j) tmp[i * m + j] = tmp[i * m + j] + hF[i * m + k] * J[k * m + j];
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
          for (int j = 0; j < m; ++j)
            pull[i * m + j] = pull[i * m + j] + J[k * m + i] * tmp[k * m + j];
      S c2 = c * c;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          g[i * n + j] = c2 * ((1.0 - mix) * pull[i * m + j] + mix * h[i * m + j]);
      return;
    }

    S w(0.0);
    if (rho_only || b == 1 || b == 5) {
      w = 0.5 * (ep - em);
    } else if (b == 2 || b == 4) {
      S d = (b == 2) ? del[0].eval(t) : del[2].eval(t);
      if (eta) d = (*eta) * (1.0 + d) - 1.0;
      w = 0.5 * (ep + d * em);
    } else if (eta) {
      S d = S(2.0 * (*eta) - 1.0);
      w = 0.5 * (ep + d * em);
    } else {
      w = c;  // identity gluing: both factors carry cosh^2
    }
    S c2 = c * c, w2 = w * w;
    for (int i = 0; i < dN; ++i)
      for (int j = 0; j < dN; ++j) g[i * n + j] = c2 * bN[i * dN + j];
    g[dN * n + dN] = w2 * bC[0];
  }
};

Box product_box(const ChartMetric& sN, const ChartMetric& sC, double t_lo, double t_hi) {
  Box b;
  b.axes = sN.domain.axes;
  b.axes.insert(b.axes.end(), sC.domain.axes.begin(), sC.domain.axes.end());
  b.axes.push_back(Axis{t_lo, t_hi, false});
  return b;
}

bool hyperbolic_or_thin(const ChartMetric& sN) {
  return sN.dim == 1 ||
         (sN.constant_curvature && std::abs(*sN.constant_curvature + 1.0) < 1e-14);
}

std::string fmt(double v) {
  std::string s = std::to_string(v);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

ChartMetric tube_metric(const ChartMetric& sigma_N, double len) {
  if (!(len > 0.0)) throw FamilyError("tube_metric: length must be positive");
  if (!sigma_N.eval_dual) throw FamilyError("tube_metric: factor chart must be dual-capable");
  FamilyEval f;
  f.alpha = 1.0;
  f.tcoef = 1.0;
  f.sN = sigma_N;
  f.sC = circle();
  f.dN = sigma_N.dim;
  f.n = f.dN + 2;
  f.rho_only = true;
  ChartMetric m = make_chart_metric(
      f.n, product_box(f.sN, f.sC, 1e-3, len - 1e-3),
      "tube(" + sigma_N.name + "; len=" + fmt(len) + ")", f);
  if (hyperbolic_or_thin(sigma_N)) m.constant_curvature = -1.0;
  return m;
}

ChartMetric build_rho_r(double r, const ChartMetric& sigma_N) {
  if (!(r > 0.0)) throw FamilyError("build_rho_r: r must be positive");
  if (!sigma_N.eval_dual) throw FamilyError("build_rho_r: factor chart must be dual-capable");
  FamilyEval f;
  f.alpha = r / 6.0;
  f.tcoef = f.alpha * f.alpha;
  f.sN = sigma_N;
  f.sC = circle();
  f.dN = sigma_N.dim;
  f.n = f.dN + 2;
  f.rho_only = true;
  ChartMetric m = make_chart_metric(f.n, product_box(f.sN, f.sC, 0.05, 5.95),
                                    "rho_r(r=" + fmt(r) + ")", f);
  if (hyperbolic_or_thin(sigma_N)) m.constant_curvature = -1.0;
  return m;
}

std::array<double, 2> PiecewiseWarpMetric::branch_interval(int k) const {
  switch (k) {
    case 1:
      return {0.05, 2.0};
    case 2:
      return {2.0, 3.0};
    case 3:
      return {3.0, 4.0};
    case 4:
      return {4.0, 5.0};
    case 5:
      return {5.0, 5.95};
  }
  throw Error("branch index must lie in 1..5");
}

Box PiecewiseWarpMetric::factor_box() const {
  Box b;
  b.axes = sigma_N.domain.axes;
  b.axes.insert(b.axes.end(), sigma_S1.domain.axes.begin(), sigma_S1.domain.axes.end());
  return b;
}

namespace {

FamilyEval family_eval_of(const PiecewiseWarpMetric& m, int fixed_branch) {
  FamilyEval f;
  f.alpha = m.alpha;
  f.tcoef = m.alpha * m.alpha;
  f.sN = m.sigma_N;
  f.sC = m.sigma_S1;
  f.del = m.deltas;
  f.glu = m.gluing;
  f.eta = m.eta;
  f.dN = m.sigma_N.dim;
  f.n = f.dN + 2;
  f.fixed_branch = fixed_branch;
  return f;
}

std::string family_name(const PiecewiseWarpMetric& m) {
  if (m.eta) return "lambda_r_s(r=" + fmt(m.r) + ", eta=" + fmt(*m.eta) + ")";
  return "lambda_r(r=" + fmt(m.r) + ", twist=" + m.gluing.name + ")";
}

}  // namespace

ChartMetric PiecewiseWarpMetric::chart() const {
  FamilyEval f = family_eval_of(*this, 0);
  return make_chart_metric(f.n, product_box(sigma_N, sigma_S1, 0.05, 5.95),
                           family_name(*this), f);
}

ChartMetric PiecewiseWarpMetric::branch(int k) const {
  auto iv = branch_interval(k);
  FamilyEval f = family_eval_of(*this, k);
  return make_chart_metric(f.n, product_box(sigma_N, sigma_S1, iv[0], iv[1]),
                           family_name(*this) + "#" + std::to_string(k), f);
}

namespace {

// value, d/dt, d2/dt2 of every component at (y, tau) from one dual sweep
std::array<Eigen::MatrixXd, 3> metric_t_jets(const ChartMetric& c,
                                             const Eigen::VectorXd& y, double tau) {
  const int n = c.dim;
  std::vector<Dual2> xs(n), gs(static_cast<size_t>(n) * n);
  for (int i = 0; i < n - 1; ++i) xs[i] = Dual2(y[i]);
  xs[n - 1].v.v = tau;
  xs[n - 1].v.d = 1.0;
  xs[n - 1].d.v = 1.0;
  std::array<Eigen::MatrixXd, 3> out;
  c.eval_dual(xs.data(), gs.data());
  for (int o = 0; o < 3; ++o) out[o].resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out[0](i, j) = gs[i * n + j].v.v;
      out[1](i, j) = gs[i * n + j].v.d;
      out[2](i, j) = gs[i * n + j].d.d;
    }
  return out;
}

void validate_family(const PiecewiseWarpMetric& m) {
  Rng rng(9001);
  for (int k = 1; k <= 5; ++k) {
    ChartMetric b = m.branch(k);
    for (int j = 0; j < 6; ++j) {
      Eigen::VectorXd x = sample_point(b.domain, rng);
      Eigen::MatrixXd g = b.components(x);
      Eigen::LLT<Eigen::MatrixXd> llt(g);
      if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        throw FamilyError("branch " + std::to_string(k) +
                          " not positive definite at t = " + fmt(x[x.size() - 1]) +
                          " (min eigenvalue " + std::to_string(es.eigenvalues()[0]) +
                          ")");
      }
    }
  }
  BreakpointReport rep = breakpoint_smoothness(m, 0, 4321, 8);
  if (!rep.pass) {
    for (const auto& row : rep.rows)
      if (row.mismatch[0] > rep.tolerance[0])
        throw FamilyError("gluing incompatibility at breakpoint t = " + fmt(row.knot) +
                          ": component mismatch " + std::to_string(row.mismatch[0]) +
                          " exceeds " + std::to_string(rep.tolerance[0]));
  }
}

}  // namespace

PiecewiseWarpMetric build_lambda_r_with_profiles(double r, const ChartMetric& sigma_N,
                                                 const GluingMap& f,
                                                 std::array<ScalarProfile, 3> deltas,
                                                 double margin) {
  if (!(r > 0.0)) throw FamilyError("build_lambda_r: r must be positive");
  if (!sigma_N.eval_dual)
    throw FamilyError("build_lambda_r: factor chart must be dual-capable");
  if (f.dim != sigma_N.dim + 1)
    throw FamilyError("build_lambda_r: gluing map dimension must be dim(sigma_N) + 1");
  PiecewiseWarpMetric m;
  m.r = r;
  m.alpha = r / 6.0;
  m.margin = margin;
  m.sigma_N = sigma_N;
  m.sigma_S1 = circle();
  m.deltas = std::move(deltas);
  m.gluing = f;
  validate_family(m);
  return m;
}

PiecewiseWarpMetric build_lambda_r(double r, const ChartMetric& sigma_N,
                                   const GluingMap& f, double margin) {
  return build_lambda_r_with_profiles(r, sigma_N, f, delta_profiles(margin), margin);
}

PiecewiseWarpMetric build_lambda_r_s(double r, double s, const TwistIsotopy& isotopy,
                                     const ChartMetric& sigma_N, double margin) {
  if (!(s >= 0.0 && s <= 1.0))
    throw FamilyError("build_lambda_r_s: family parameter s outside [0,1]");
  if (isotopy.spec.dim != sigma_N.dim + 1)
    throw FamilyError("build_lambda_r_s: isotopy dimension must be dim(sigma_N) + 1");

  // endpoint contract: at(0) = the family twist, at(1/2) = identity,
  // constant near both ends
  if (isotopy.ramp.value(0.0) != 1.0 || isotopy.ramp.value(0.5) != 0.0 ||
      isotopy.ramp.value(0.005) != 1.0 || isotopy.ramp.value(0.495) != 0.0)
    throw FamilyError("build_lambda_r_s: isotopy endpoint violation (ramp must be "
                      "exactly 1 near s = 0 and 0 near s = 1/2)");
  {
    Rng rng(77);
    Box fb;
    fb.axes = sigma_N.domain.axes;
    fb.axes.push_back(Axis{0.0, 2.0 * M_PI, true});
    GluingMap half = isotopy.at(0.5);
    GluingMap zero = isotopy.at(0.0);
    GluingMap base = make_twist(isotopy.spec);
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXd y = sample_point(fb, rng);
      if ((half.forward(y) - y).cwiseAbs().maxCoeff() > 1e-12)
        throw FamilyError("build_lambda_r_s: isotopy endpoint violation (f at s = 1/2 "
                          "is not the identity)");
      if ((zero.forward(y) - base.forward(y)).cwiseAbs().maxCoeff() > 1e-12)
        throw FamilyError("build_lambda_r_s: isotopy endpoint violation (f at s = 0 "
                          "is not the base twist)");
    }
  }

  if (s < 0.5)
    return build_lambda_r_with_profiles(r, sigma_N, isotopy.at(s),
                                        delta_profiles(margin), margin);

  TwistSpec id;
  id.kind = TwistSpec::Kind::identity;
  id.dim = sigma_N.dim + 1;
  PiecewiseWarpMetric m;
  m.r = r;
  m.alpha = r / 6.0;
  m.margin = margin;
  m.sigma_N = sigma_N;
  m.sigma_S1 = circle();
  m.deltas = delta_profiles(margin);
  m.gluing = make_twist(id);
  m.eta = eta_profile(margin).value(s);
  validate_family(m);
  return m;
}

double BreakpointReport::worst(int ord) const {
  double w = 0.0;
  for (const Row& row : rows) w = std::max(w, row.mismatch[ord]);
  return w;
}

BreakpointReport breakpoint_smoothness(const PiecewiseWarpMetric& m, int order,
                                       std::uint64_t seed, int samples) {
  if (order < 0 || order > 2)
    throw Error("breakpoint_smoothness: order must be 0, 1 or 2");
  BreakpointReport rep;
  rep.order = order;
  Rng rng(seed);
  const Box fb = m.factor_box();
  const int n = m.dim(), mfac = n - 1;
  std::array<ChartMetric, 6> br;
  for (int k = 1; k <= 5; ++k) br[k] = m.branch(k);

  for (int ki = 0; ki < 4; ++ki) {
    const double tau = PiecewiseWarpMetric::knots[ki];
    const int left = ki + 1, right = ki + 2;
    const bool glued = tau == 3.0 && !m.eta && !m.gluing.is_identity;
    BreakpointReport::Row row;
    row.knot = tau;
    for (int si = 0; si < samples; ++si) {
      Eigen::VectorXd y = sample_point(fb, rng);
      std::array<Eigen::MatrixXd, 3> jr = metric_t_jets(br[right], y, tau);
      std::array<Eigen::MatrixXd, 3> jl;
      if (!glued) {
        jl = metric_t_jets(br[left], y, tau);
      } else {
        // left branch seen through the reglued chart: J^T g(F(y)) J per order
        // (the gluing map does not touch t, so conjugation and d/dt commute)
        Eigen::MatrixXd Jfull = Eigen::MatrixXd::Identity(n, n);
        Jfull.topLeftCorner(mfac, mfac) = m.gluing.jacobian(y);
        std::array<Eigen::MatrixXd, 3> raw =
            metric_t_jets(br[left], m.gluing.forward(y), tau);
        for (int o = 0; o < 3; ++o) jl[o] = Jfull.transpose() * raw[o] * Jfull;
      }
      for (int o = 0; o <= order; ++o) {
        double scale = 1.0 + std::max(jl[o].cwiseAbs().maxCoeff(),
                                      jr[o].cwiseAbs().maxCoeff());
        row.mismatch[o] =
            std::max(row.mismatch[o], (jl[o] - jr[o]).cwiseAbs().maxCoeff() / scale);
      }
    }
    for (int o = 0; o <= order; ++o)
      if (row.mismatch[o] > rep.tolerance[o]) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

std::pair<WarpFunction, WarpFunction> rescaled_warps(const PiecewiseWarpMetric& m,
                                                     int branch) {
  auto iv = m.branch_interval(branch);
  const double a = m.alpha;
  auto window = [&](WarpFunction w) {
    w.t_lo = iv[0] * a;
    w.t_hi = iv[1] * a;
    return w;
  };
  WarpFunction c = window(warp_cosh());

  if (branch == 1 || branch == 5) return {c, window(warp_sinh())};

  if (branch == 3) {
    if (m.eta) {
      const double D = 2.0 * (*m.eta) - 1.0;
      WarpFunction w;
      w.name = "eta-mix";
      w.value = [D](double T) { return 0.5 * (std::exp(T) + D * std::exp(-T)); };
      w.d1 = [D](double T) { return 0.5 * (std::exp(T) - D * std::exp(-T)); };
      w.d2 = [D](double T) { return 0.5 * (std::exp(T) + D * std::exp(-T)); };
      return {c, window(w)};
    }
    if (m.gluing.is_identity) return {c, window(warp_cosh())};
    throw FamilyError("rescaled_warps: twisted middle branch is not a warped product");
  }

  // branches 2 and 4: S^1 coefficient (e^T + D(T) e^-T)/2 in T = alpha t,
  // D(T) = delta(T/a) possibly remapped by eta
  const ScalarProfile prof = m.deltas[branch == 2 ? 0 : 2];
  const std::optional<double> eta = m.eta;
  WarpFunction w;
  w.name = "transition";
  w.value = [prof, eta, a](double T) {
    double d = prof.value(T / a);
    if (eta) d = *eta * (1.0 + d) - 1.0;
    return 0.5 * (std::exp(T) + d * std::exp(-T));
  };
  w.d1 = [prof, eta, a](double T) {
    double d = prof.value(T / a), dp = prof.d1(T / a) / a;
    if (eta) {
      dp *= *eta;
      d = *eta * (1.0 + d) - 1.0;
    }
    return 0.5 * (std::exp(T) + (dp - d) * std::exp(-T));
  };
  w.d2 = [prof, eta, a](double T) {
    double d = prof.value(T / a), dp = prof.d1(T / a) / a,
           dpp = prof.d2(T / a) / (a * a);
    if (eta) {
      dpp *= *eta;
      dp *= *eta;
      d = *eta * (1.0 + d) - 1.0;
    }
    return 0.5 * (std::exp(T) + (dpp - 2.0 * dp + d) * std::exp(-T));
  };
  return {c, window(w)};
}

}  // namespace warpcurv
