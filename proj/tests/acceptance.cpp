// Acceptance battery: eight end-to-end checks covering the closed-form
// curvature oracle, operator structure, convexity, calibration, pinching
// thresholds, metric families, heat flow, and CLI reproducibility. Prints
// one [PASS]/[FAIL] line per criterion with timing; exits nonzero if any
// criterion fails. All tolerances are pinned in this file.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "warpcurv/families.hpp"
#include "warpcurv/gluing.hpp"
#include "warpcurv/heat_flow.hpp"
#include "warpcurv/model_metrics.hpp"
#include "warpcurv/pinching.hpp"
#include "warpcurv/rng.hpp"
#include "warpcurv/tensor_engine.hpp"
#include "warpcurv/warp.hpp"

namespace fs = std::filesystem;
using namespace warpcurv;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// ---- shared helpers --------------------------------------------------------

struct ProductConfig {
  ChartMetric s1, s2;
  WarpFunction p1, p2;
  double t_lo, t_hi;
  std::string label;
};

Eigen::VectorXd product_point(const WarpContext& ctx) {
  const int d1 = ctx.sigma1->dim, d2 = ctx.sigma2->dim;
  Eigen::VectorXd x(d1 + d2 + 1);
  x.head(d1) = ctx.x1;
  x.segment(d1, d2) = ctx.x2;
  x[d1 + d2] = ctx.t;
  return x;
}

WarpContext context_at(const ProductConfig& c, Rng& rng) {
  WarpContext ctx;
  ctx.sigma1 = &c.s1;
  ctx.sigma2 = &c.s2;
  ctx.phi1 = c.p1;
  ctx.phi2 = c.p2;
  ctx.x1 = sample_point(c.s1.domain, rng);
  ctx.x2 = sample_point(c.s2.domain, rng);
  ctx.t = rng.uniform(c.t_lo + 0.05, c.t_hi - 0.05);
  return ctx;
}

// ---- criterion 1: closed-form K vs the chart tensor engine ------------------

Outcome criterion_oracle_equivalence() {
  const double tol = 1e-5;
  const int frames_per_config = 110;
  std::vector<ProductConfig> configs;
  configs.push_back({hyperbolic_half_plane(), round_sphere(), warp_cosh(),
                     warp_two_plus_sin(), 0.3, 1.3, "hyp x sphere, cosh/2+sin"});
  configs.push_back({hyperbolic_half_plane(), hyperbolic_cylinder(), warp_exp(),
                     warp_exp(), 0.3, 1.3, "hyp x hyp, exp/exp"});
  configs.push_back({hyperbolic_cylinder(), circle(), warp_cosh(), warp_sinh(),
                     0.3, 1.3, "hyp x circle, cosh/sinh"});
  configs.push_back({flat_torus(), round_sphere(), warp_two_plus_sin(),
                     warp_cosh(), 0.3, 1.3, "torus x sphere, 2+sin/cosh"});

  Rng rng(101);
  double worst = 0.0;
  int frames = 0;
  for (const auto& c : configs) {
    ChartMetric prod =
        assemble_doubly_warped(c.s1, c.s2, c.p1, c.p2, c.t_lo, c.t_hi);
    for (int k = 0; k < frames_per_config; ++k) {
      WarpContext ctx = context_at(c, rng);
      DoublyWarpedFrame f = random_frame(rng, c.s1.dim, c.s2.dim);
      f.K1 = c.s1.constant_curvature ? *c.s1.constant_curvature : 0.0;
      f.K2 = c.s2.constant_curvature ? *c.s2.constant_curvature : 0.0;
      double closed = doubly_warped_K(c.p1, c.p2, ctx.t, f);
      double engine = sectional_at(prod, frame_to_chart_plane(ctx, f));
      worst = std::max(worst, std::abs(closed - engine));
      ++frames;
    }
  }
  bool ok = frames >= 400 && worst <= tol;
  return {ok, std::to_string(frames) + " frames / " +
                  std::to_string(configs.size()) + " configs, worst " +
                  fmt(worst) + " (tol " + fmt(tol) + ")"};
}

// ---- criterion 2: operator spectrum, connection identities, Koszul ----------

Outcome criterion_operator_structure() {
  const double tol_eigen = 1e-5, tol_conn = 1e-5, tol_koszul = 1e-7;
  Rng rng(202);

  // eigen-pairs on a 4-D product (2-sphere x circle): multiplicities 2/1/2/1
  ProductConfig c4{round_sphere(), circle(), warp_two_plus_sin(), warp_exp(),
                   0.2, 1.2, "sphere x circle"};
  ChartMetric rho4 =
      assemble_doubly_warped(c4.s1, c4.s2, c4.p1, c4.p2, c4.t_lo, c4.t_hi);
  double worst_eigen = 0.0;
  for (int k = 0; k < 8; ++k) {
    WarpContext ctx = context_at(c4, rng);
    CurvatureOperator op = curvature_operator_at(rho4, product_point(ctx));
    if (op.pairs.size() != 6) return {false, "expected 6 two-forms in 4-D"};
    Eigen::VectorXd ev = op.eigenvalues();
    std::vector<double> got(ev.data(), ev.data() + ev.size());
    std::vector<double> want = {
        warped_curvature_image(c4.p1, c4.p2, ctx.t, TwoFormTag::dt_u),
        warped_curvature_image(c4.p1, c4.p2, ctx.t, TwoFormTag::dt_u),
        warped_curvature_image(c4.p1, c4.p2, ctx.t, TwoFormTag::dt_v),
        warped_curvature_image(c4.p1, c4.p2, ctx.t, TwoFormTag::u_v),
        warped_curvature_image(c4.p1, c4.p2, ctx.t, TwoFormTag::u_v),
        warped_curvature_image(c4.p1, c4.p2, ctx.t, TwoFormTag::u_u, 1.0)};
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 6; ++i)
      worst_eigen = std::max(worst_eigen, std::abs(got[i] - want[i]));
  }

  // connection identities for constant-component tagged fields
  ProductConfig c5{round_sphere(), hyperbolic_cylinder(), warp_two_plus_sin(),
                   warp_exp(), 0.2, 1.2, "sphere x hyp"};
  ChartMetric rho5 =
      assemble_doubly_warped(c5.s1, c5.s2, c5.p1, c5.p2, c5.t_lo, c5.t_hi);
  const int d1 = c5.s1.dim, d2 = c5.s2.dim, n = d1 + d2 + 1;
  double worst_conn = 0.0;
  for (int k = 0; k < 10; ++k) {
    WarpContext ctx = context_at(c5, rng);
    Christoffels G = christoffel_at(rho5, product_point(ctx));
    auto embed = [&](const TaggedVector& v) {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
      if (v.tag == VecTag::radial) out[n - 1] = 1.0;
      if (v.tag == VecTag::factor1) out.head(d1) = v.comp;
      if (v.tag == VecTag::factor2) out.segment(d1, d2) = v.comp;
      return out;
    };
    auto rand_comp = [&](int d) {
      Eigen::VectorXd v(d);
      for (int i = 0; i < d; ++i) v[i] = rng.normal();
      return v;
    };
    TaggedVector dt{VecTag::radial, {}};
    TaggedVector u1{VecTag::factor1, rand_comp(d1)};
    TaggedVector u2{VecTag::factor1, rand_comp(d1)};
    TaggedVector v1{VecTag::factor2, rand_comp(d2)};
    TaggedVector v2{VecTag::factor2, rand_comp(d2)};
    const std::pair<TaggedVector, TaggedVector> cases[] = {
        {dt, dt}, {dt, u1}, {u1, dt}, {dt, v1}, {u1, u2}, {v1, v2}, {u1, v1}};
    for (const auto& [X, Y] : cases) {
      Eigen::VectorXd claimed = warped_connection_term(ctx, X, Y);
      Eigen::VectorXd xe = embed(X), ye = embed(Y);
      Eigen::VectorXd oracle = Eigen::VectorXd::Zero(n);
      for (int kk = 0; kk < n; ++kk)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            oracle[kk] += G.at(kk, i, j) * xe[i] * ye[j];
      worst_conn =
          std::max(worst_conn, (claimed - oracle).cwiseAbs().maxCoeff());
    }
  }

  // Koszul residual through the forward-mode (dual number) metric path
  double worst_koszul = 0.0;
  for (int k = 0; k < 10; ++k) {
    WarpContext ctx = context_at(c5, rng);
    worst_koszul =
        std::max(worst_koszul, koszul_residual(rho5, product_point(ctx)));
  }

  bool ok = worst_eigen <= tol_eigen && worst_conn <= tol_conn &&
            worst_koszul <= tol_koszul;
  return {ok, "eigen " + fmt(worst_eigen) + ", connection " + fmt(worst_conn) +
                  ", koszul " + fmt(worst_koszul)};
}

// ---- criterion 3: convex weights and term bracketing -------------------------

Outcome criterion_convexity() {
  const double tol_sum = 1e-10, tol_entry = -1e-12, tol_bracket = 1e-10;
  Rng rng(303);
  const std::pair<WarpFunction, WarpFunction> pairs[] = {
      {warp_cosh(), warp_sinh()},
      {warp_exp(), warp_exp()},
      {warp_two_plus_sin(), warp_cosh()}};
  const std::pair<int, int> dims[] = {{2, 2}, {2, 1}, {1, 2}, {3, 2}};

  double worst_sum = 0.0, worst_entry = 0.0, worst_bracket = 0.0;
  int frames = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto& [p1, p2] = pairs[k % 3];
    const auto& [d1, d2] = dims[k % 4];
    double t = rng.uniform(0.3, 1.3);
    DoublyWarpedFrame f = random_frame(rng, d1, d2);
    f.K1 = rng.uniform(-2.0, 2.0);
    f.K2 = rng.uniform(-2.0, 2.0);

    std::array<double, 5> w = convex_weights(f);
    double sum = 0.0;
    for (double wi : w) {
      sum += wi;
      worst_entry = std::min(worst_entry, wi);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

    std::array<double, 5> T = warp_terms(p1, p2, t, f.K1, f.K2);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < 5; ++i) {
      if (w[static_cast<size_t>(i)] <= 1e-12) continue;
      lo = std::min(lo, T[static_cast<size_t>(i)]);
      hi = std::max(hi, T[static_cast<size_t>(i)]);
    }
    double K = doubly_warped_K(p1, p2, t, f);
    worst_bracket = std::max({worst_bracket, lo - K, K - hi});
    ++frames;
  }
  bool ok = frames == 1000 && worst_sum <= tol_sum &&
            worst_entry >= tol_entry && worst_bracket <= tol_bracket;
  return {ok, "1000 frames: |sum-1| " + fmt(worst_sum) + ", min entry " +
                  fmt(worst_entry) + ", bracket excess " + fmt(worst_bracket)};
}

// ---- criterion 4: constant-curvature calibration ----------------------------

Outcome criterion_calibration() {
  RangeSpec spec;
  spec.points = 100;
  spec.planes_per_point = 20;
  spec.seed = 404;

  auto dev = [&](const ChartMetric& m, double expect) {
    PinchReport r = curvature_range(m, spec);
    return std::max(std::abs(r.K_min - expect), std::abs(r.K_max - expect));
  };
  double tube = dev(tube_metric(hyperbolic_cylinder(), 6.0), -1.0);
  double sphere = dev(round_sphere(), 1.0);
  double torus = dev(flat_torus(), 0.0);

  bool ok = tube <= 1e-5 && sphere <= 1e-5 && torus <= 1e-6;
  return {ok, "tube dev " + fmt(tube) + " (tol 1e-5), sphere " + fmt(sphere) +
                  " (tol 1e-5), torus " + fmt(torus) + " (tol 1e-6)"};
}

// ---- criterion 5: pinching thresholds and rescaling invariance ---------------

Outcome criterion_alpha_threshold() {
  const double analytic = 0.5 * std::log(10.0);  // e^{-2 alpha} = 0.1 at t = 1

  WarpFamily expf = exp_warp_family({-1.0, 1.0}, {-1.0, 1.0}, 1.0, 2.0);
  Alpha0Report a = find_alpha0(expf, 0.1, linear_grid(1.0, 1.5, 0.01));
  bool exp_ok = a.found && std::abs(a.alpha0 - 1.16) <= 0.01 &&
                a.alpha0 >= analytic && a.alpha0 - analytic <= 0.01 + 1e-9;

  WarpFamily tube = cosh_sinh_tube_family(1.0, 2.0);
  std::vector<double> grid = linear_grid(0.5, 1.0, 0.1);
  Alpha0Report b = find_alpha0(tube, 0.1, grid);
  bool tube_ok = b.found && b.alpha0 == grid.front();

  double res1 = rescaling_isometry_residual(hyperbolic_cylinder(), 4.8, 7);
  double res2 = rescaling_isometry_residual(round_sphere(), 7.5, 11);
  bool iso_ok = res1 <= 1e-6 && res2 <= 1e-6;

  bool ok = exp_ok && tube_ok && iso_ok;
  return {ok, "exp alpha0 " + fmt(a.alpha0) + " (analytic " + fmt(analytic) +
                  "), tube alpha0 " + fmt(b.alpha0) + " (first grid pt), " +
                  "rescale residual " + fmt(std::max(res1, res2))};
}

// ---- criterion 6: metric family structure and the pinched sweep --------------

Outcome criterion_families() {
  ChartMetric hyp = hyperbolic_cylinder();
  Rng rng(606);

  TwistSpec loc;
  loc.kind = TwistSpec::Kind::localized;
  loc.dim = 3;
  loc.angle = 0.8;
  loc.center = Eigen::VectorXd(2);
  loc.center << 0.3, 1.2;
  loc.radius = 0.6;
  TwistIsotopy iso = make_twist_isotopy(loc);

  // s = 1 member equals the straight family bitwise at sampled points
  ChartMetric rho9 = build_rho_r(9.0, hyp);
  PiecewiseWarpMetric lam1 = build_lambda_r_s(9.0, 1.0, iso, hyp);
  ChartMetric lam1c = lam1.chart();
  double eq_dev = 0.0;
  for (int k = 0; k < 40; ++k) {
    Eigen::VectorXd x = sample_point(rho9.domain, rng);
    eq_dev = std::max(
        eq_dev, (lam1c.components(x) - rho9.components(x)).cwiseAbs().maxCoeff());
  }
  bool eq_ok = eq_dev == 0.0;

  // continuity in s: component modulus shrinks linearly with delta
  auto s_diff = [&](double s, double delta, const Eigen::VectorXd& x) {
    ChartMetric a = build_lambda_r_s(9.0, s, iso, hyp).chart();
    ChartMetric b = build_lambda_r_s(9.0, s + delta, iso, hyp).chart();
    return (a.components(x) - b.components(x)).cwiseAbs().maxCoeff();
  };
  double diff_coarse = 0.0, diff_fine = 0.0;
  for (double s : {0.0, 0.2, 0.45, 0.6, 0.85}) {
    for (int k = 0; k < 5; ++k) {
      Eigen::VectorXd x = sample_point(rho9.domain, rng);
      diff_coarse = std::max(diff_coarse, s_diff(s, 1e-2, x));
      diff_fine = std::max(diff_fine, s_diff(s, 1e-4, x));
    }
  }
  bool cont_ok = diff_fine <= 1e-2 && diff_fine <= diff_coarse / 5.0 + 1e-14;

  // order-2 breakpoint smoothness on twisted members
  BreakpointReport bp1 = breakpoint_smoothness(build_lambda_r(9.0, hyp, make_twist(loc)), 2);
  BreakpointReport bp2 = breakpoint_smoothness(build_lambda_r_s(9.0, 0.75, iso, hyp), 2);
  double worst_bp = 0.0;
  for (const auto* bp : {&bp1, &bp2})
    for (const auto& row : bp->rows)
      worst_bp = std::max(worst_bp, row.mismatch[2]);
  bool bp_ok = bp1.pass && bp2.pass && worst_bp <= 1e-6;

  // identity-twist r sweep: some grid r lands in (-1.2, -0.8) and the worst
  // deviation from -1 never increases along the grid; the half-plane factor
  // leaves r = 6 visibly unpinched so the threshold is interior to the grid
  ChartMetric hplane = hyperbolic_half_plane();
  GluingMap ident = make_twist(TwistSpec{TwistSpec::Kind::identity, 3, 0.0,
                                         Eigen::VectorXd::Zero(2), 1.0});
  auto builder = [&](double r, double) {
    return build_lambda_r(r, hplane, ident);
  };
  RangeSpec spec;
  spec.points = 80;
  spec.planes_per_point = 12;
  spec.seed = 3;
  RSweepReport sweep = find_min_r(builder, 0.2, {6.0, 9.0, 12.0, 15.0}, {0.0}, spec);
  bool mono = true;
  for (size_t i = 1; i < sweep.table.size(); ++i)
    mono = mono && sweep.table[i].worst_dev <= sweep.table[i - 1].worst_dev;
  bool sweep_ok = sweep.found && mono && sweep.table.back().pass &&
                  !sweep.table.front().pass;

  bool ok = eq_ok && cont_ok && bp_ok && sweep_ok;
  return {ok, "s=1 dev " + fmt(eq_dev) + " (exact), s-modulus " +
                  fmt(diff_fine) + " @1e-4 vs " + fmt(diff_coarse) +
                  " @1e-2, breakpoint order-2 " + fmt(worst_bp) +
                  ", r* " + (sweep.found ? fmt(sweep.r_star) : "none")};
}

// ---- criterion 7: heat flow to closed geodesics ------------------------------

struct FlowCheck {
  bool ok = false;
  double energy = 0.0, seconds = 0.0;
  std::string what;
};

FlowCheck run_flow(ClosedCurve curve, int pre_steps) {
  FlowCheck out;
  auto start = std::chrono::steady_clock::now();
  const std::vector<int> winding = curve.winding;

  // per-step phase: winding intact and energy monotone on every step
  double dt = cfl_bound(curve);
  double e_prev = energy(curve);
  for (int s = 0; s < pre_steps; ++s) {
    flow_step(curve, dt);
    double e = energy(curve);
    if (curve.winding != winding) {
      out.what = "winding changed at step " + std::to_string(s);
      return out;
    }
    if (e > e_prev + 1e-12 * std::max(1.0, std::abs(e_prev))) {
      out.what = "energy increased at step " + std::to_string(s);
      return out;
    }
    e_prev = e;
  }

  FlowParams p;
  p.tol = 1e-6;
  FlowResult res = flow_until(curve, p);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  out.energy = res.final_energy;

  bool trace_mono = true;
  for (size_t i = 1; i < res.trace.rows.size(); ++i)
    trace_mono = trace_mono && res.trace.rows[i].energy <=
                                   res.trace.rows[i - 1].energy +
                                       1e-12 * std::abs(res.trace.rows[i - 1].energy);

  const double pi = M_PI;
  out.ok = res.status == FlowStatus::converged && curve.winding == winding &&
           trace_mono && std::abs(res.final_energy - pi) <= 1e-3 &&
           out.seconds <= 60.0;
  if (!out.ok && out.what.empty())
    out.what = std::string("status ") + to_string(res.status);
  return out;
}

Outcome criterion_heat_flow() {
  ClosedCurve torus_loop = perturbed_loop(flat_torus(), 256, {1, 0},
                                          Eigen::VectorXd::Zero(2), 1, 0.3);
  FlowCheck a = run_flow(std::move(torus_loop), 500);

  Eigen::VectorXd base(2);
  base << 0.0, 0.5;
  ClosedCurve offset = straight_loop(hyperbolic_cylinder(), 256, {1, 0}, base);
  FlowCheck b = run_flow(std::move(offset), 500);

  bool ok = a.ok && b.ok;
  std::string detail = "torus E " + fmt(a.energy) + " in " + fmt(a.seconds) +
                       "s, cylinder E " + fmt(b.energy) + " in " +
                       fmt(b.seconds) + "s (target pi +- 1e-3)";
  if (!a.what.empty()) detail += "; torus: " + a.what;
  if (!b.what.empty()) detail += "; cylinder: " + b.what;
  return {ok, detail};
}

// ---- criterion 8: CLI reproducibility ----------------------------------------

#ifdef WARPCURV_BIN
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out << line << "\n";
  return out.str();
}

Outcome criterion_cli_reproducibility() {
  const fs::path work = fs::temp_directory_path() / "warpcurv_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::map<std::string, std::string> configs = {
      {"curvature-sweep",
       R"({"metric":"lambda_r_s","factor":"hyperbolic-cylinder","r":9.0,"s":0.75,
           "twist":"localized","angle":0.8,"center":[0.3,1.2],"radius":0.6,
           "points":20,"planes_per_point":6,"seed":7})"},
      {"pinch-find",
       R"({"search":"alpha0","family":"exp","K1":[-1.0,1.0],"K2":[-1.0,1.0],
           "eps":0.1,"alpha_lo":1.0,"alpha_hi":1.5,"alpha_step":0.01})"},
      {"family-check",
       R"({"family":"rho_r","factor":"hyperbolic-cylinder","r":12.0,
           "points":30,"planes_per_point":8,"target":[-1.0001,-0.9999]})"},
      {"heatflow",
       R"({"metric":"flat-torus","npts":64,"winding":[1,0],"perturb_axis":1,
           "amplitude":0.2,"tol":1e-5,"energy_target":3.141592653589793})"},
      {"oracle-check", R"({"points":30,"planes_per_point":8,"seed":1})"}};

  for (const auto& [cmd, body] : configs) {
    fs::path cfg = work / (cmd + ".json");
    std::ofstream(cfg) << body;
    fs::path out1 = work / (cmd + "_1"), out2 = work / (cmd + "_2");
    for (const fs::path& out : {out1, out2}) {
      std::string invocation = std::string(WARPCURV_BIN) + " " + cmd +
                               " --config " + cfg.string() + " --out " +
                               out.string() + " > /dev/null 2>&1";
      int raw = std::system(invocation.c_str());
      int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
      if (code != 0)
        return {false, cmd + " exited " + std::to_string(code)};
    }
    if (strip_timestamp(slurp(out1 / "report.json")) !=
        strip_timestamp(slurp(out2 / "report.json")))
      return {false, cmd + ": report.json differs between reruns"};
    for (const auto& entry : fs::directory_iterator(out1)) {
      if (entry.path().extension() != ".csv") continue;
      fs::path twin = out2 / entry.path().filename();
      if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin))
        return {false, cmd + ": " + entry.path().filename().string() +
                           " differs between reruns"};
    }
  }
  return {true, std::to_string(configs.size()) +
                    " commands byte-identical apart from timestamps"};
}
#endif

}  // namespace

int main() {
  using Runner = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Runner>> criteria = {
      {"closed-form curvature matches the chart engine",
       criterion_oracle_equivalence},
      {"operator spectrum, connection identities, Koszul residual",
       criterion_operator_structure},
      {"convex weights and term bracketing", criterion_convexity},
      {"constant-curvature calibration", criterion_calibration},
      {"pinching thresholds and rescaling invariance",
       criterion_alpha_threshold},
      {"metric family structure and pinched r sweep", criterion_families},
      {"heat flow converges to closed geodesics", criterion_heat_flow},
#ifdef WARPCURV_BIN
      {"CLI reproducibility", criterion_cli_reproducibility},
#endif
  };

  int failures = 0;
  int id = 0;
  for (const auto& [label, run] : criteria) {
    ++id;
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::cout << (out.ok ? "[PASS] " : "[FAIL] ") << id << ". " << label
              << " -- " << out.detail << "  [" << fmt(secs) << "s]\n";
    if (!out.ok) ++failures;
  }
  if (failures == 0)
    std::cout << "all " << id << " criteria passed\n";
  else
    std::cout << failures << " of " << id << " criteria FAILED\n";
  return failures == 0 ? 0 : 1;
}
