#include "warpcurv/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "warpcurv/errors.hpp"
#include "warpcurv/tensor_engine.hpp"

namespace warpcurv {

namespace {

WarpFunction windowed(WarpFunction w, double alpha, double a, double b) {
  w.t_lo = alpha * a;
  w.t_hi = alpha * b;
  return w;
}

double deviation(double v) { return std::abs(v + 1.0); }

std::string point_str(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

WarpFamily exp_warp_family(std::array<double, 2> K1_bounds,
                           std::array<double, 2> K2_bounds, double a, double b) {
  WarpFamily f;
  f.name = "exp/exp";
  f.a = a;
  f.b = b;
  f.K1_bounds = K1_bounds;
  f.K2_bounds = K2_bounds;
  f.phi1 = f.phi2 = [a, b](double alpha) { return windowed(warp_exp(), alpha, a, b); };
  return f;
}

WarpFamily cosh_sinh_tube_family(double a, double b) {
  WarpFamily f;
  f.name = "cosh/sinh";
  f.a = a;
  f.b = b;
  f.K1_bounds = {-1.0, -1.0};
  f.dim2 = 1;
  f.phi1 = [a, b](double alpha) { return windowed(warp_cosh(), alpha, a, b); };
  f.phi2 = [a, b](double alpha) { return windowed(warp_sinh(), alpha, a, b); };
  return f;
}

WarpFamily cosh_cosh_family(std::array<double, 2> K1_bounds,
                            std::array<double, 2> K2_bounds, double a, double b) {
  WarpFamily f;
  f.name = "cosh/cosh";
  f.a = a;
  f.b = b;
  f.K1_bounds = K1_bounds;
  f.K2_bounds = K2_bounds;
  f.phi1 = f.phi2 = [a, b](double alpha) { return windowed(warp_cosh(), alpha, a, b); };
  return f;
}

double TermBounds::min_active() const {
  double m = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 5; ++s)
    if (active[s]) m = std::min(m, lo[s]);
  return m;
}

double TermBounds::max_active() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < 5; ++s)
    if (active[s]) m = std::max(m, hi[s]);
  return m;
}

double TermBounds::max_deviation() const {
  double m = 0.0;
  for (int s = 0; s < 5; ++s)
    if (active[s]) m = std::max(m, std::max(deviation(lo[s]), deviation(hi[s])));
  return m;
}

namespace {

void validate_family_interval(const WarpFamily& fam) {
  if (!(fam.a > 0.0) || !(fam.b > fam.a))
    throw Error("warp family needs 0 < a < b");
}

TermBounds term_bounds_at(const WarpFunction& p1, const WarpFunction& p2,
                          const WarpFamily& fam, double T) {
  auto at_lo = warp_terms(p1, p2, T, fam.K1_bounds[0], fam.K2_bounds[0]);
  auto at_hi = warp_terms(p1, p2, T, fam.K1_bounds[1], fam.K2_bounds[1]);
  TermBounds b;
  b.active = {true, true, fam.dim1 > 1, fam.dim2 > 1, true};
  for (int s = 0; s < 5; ++s) {
    b.lo[s] = std::min(at_lo[s], at_hi[s]);
    b.hi[s] = std::max(at_lo[s], at_hi[s]);
  }
  return b;
}

}  // namespace

TermBounds generating_term_bounds(const WarpFamily& fam, double alpha, double t) {
  validate_family_interval(fam);
  if (!(alpha > 0.0)) throw Error("generating_term_bounds: alpha must be positive");
  if (!(t >= fam.a && t <= fam.b))
    throw Error("generating_term_bounds: t outside the declared interval");
  return term_bounds_at(fam.phi1(alpha), fam.phi2(alpha), fam, alpha * t);
}

std::array<double, 5> generating_terms(const WarpFamily& fam, double alpha, double t) {
  TermBounds b = generating_term_bounds(fam, alpha, t);
  std::array<double, 5> out;
  for (int s = 0; s < 5; ++s) {
    if (!b.active[s]) {
      out[s] = std::numeric_limits<double>::quiet_NaN();
    } else {
      out[s] = deviation(b.lo[s]) >= deviation(b.hi[s]) ? b.lo[s] : b.hi[s];
    }
  }
  return out;
}

double family_max_deviation(const WarpFamily& fam, double alpha, int t_samples) {
  validate_family_interval(fam);
  if (t_samples < 2) throw Error("family_max_deviation: need at least 2 samples");
  WarpFunction p1 = fam.phi1(alpha), p2 = fam.phi2(alpha);
  double worst = 0.0;
  for (int i = 0; i < t_samples; ++i) {
    double t = fam.a + (fam.b - fam.a) * i / (t_samples - 1);
    worst = std::max(worst, term_bounds_at(p1, p2, fam, alpha * t).max_deviation());
  }
  return worst;
}

Alpha0Report find_alpha0(const WarpFamily& fam, double eps,
                         const std::vector<double>& alpha_grid, int t_samples) {
  validate_family_interval(fam);
  if (!(eps > 0.0)) throw Error("find_alpha0: eps must be positive");
  if (alpha_grid.empty()) throw Error("find_alpha0: empty alpha grid");
  for (size_t i = 1; i < alpha_grid.size(); ++i)
    if (!(alpha_grid[i] > alpha_grid[i - 1]))
      throw Error("find_alpha0: alpha grid must be strictly increasing");
  if (t_samples < 2) throw Error("find_alpha0: need at least 2 t samples");

  Alpha0Report rep;
  rep.eps = eps;
  rep.grid = alpha_grid;
  rep.t_samples = t_samples;

  std::vector<char> pass(alpha_grid.size(), 1);
  for (size_t gi = 0; gi < alpha_grid.size(); ++gi) {
    double alpha = alpha_grid[gi];
    WarpFunction p1 = fam.phi1(alpha), p2 = fam.phi2(alpha);
    for (int ti = 0; ti < t_samples && pass[gi]; ++ti) {
      double t = fam.a + (fam.b - fam.a) * ti / (t_samples - 1);
      TermBounds b = term_bounds_at(p1, p2, fam, alpha * t);
      for (int s = 0; s < 5; ++s) {
        if (!b.active[s]) continue;
        if (b.lo[s] > -1.0 - eps && b.hi[s] < -1.0 + eps) continue;
        pass[gi] = 0;
        rep.witness_alpha = alpha;
        rep.witness_t = t;
        rep.witness_term = s;
        rep.witness_value = deviation(b.lo[s]) >= deviation(b.hi[s]) ? b.lo[s] : b.hi[s];
        break;
      }
    }
  }

  // smallest grid point from which every later point also passes
  size_t first = alpha_grid.size();
  for (size_t i = alpha_grid.size(); i-- > 0 && pass[i];) first = i;
  if (first < alpha_grid.size()) {
    rep.found = true;
    rep.alpha0 = alpha_grid[first];
  }
  return rep;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw Error("linear_grid: step must be positive");
  if (!(hi >= lo)) throw Error("linear_grid: need hi >= lo");
  std::vector<double> g;
  for (int i = 0;; ++i) {
    double v = lo + step * i;
    if (v > hi + 1e-12 * std::max(1.0, std::abs(hi))) break;
    g.push_back(v);
  }
  return g;
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0.0)) throw Error("geometric_grid: lo must be positive");
  if (!(hi >= lo)) throw Error("geometric_grid: need hi >= lo");
  if (!(ratio > 1.0)) throw Error("geometric_grid: ratio must exceed 1");
  std::vector<double> g;
  for (double v = lo; v <= hi * (1.0 + 1e-12); v *= ratio) g.push_back(v);
  return g;
}

namespace {

// all sectional values at one sample point; rng stream fixed by (seed, index)
std::vector<double> point_samples(const ChartMetric& m, const RangeSpec& spec,
                                  const std::vector<double>& knots,
                                  int index, Eigen::VectorXd& x_out) {
  Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index)));
  Eigen::VectorXd x;
  for (int tries = 0;; ++tries) {
    x = sample_point(m.domain, rng);
    bool ok = true;
    for (double k : knots)
      if (std::abs(x[m.dim - 1] - k) < spec.knot_exclusion) ok = false;
    if (ok) break;
    if (tries > 500)
      throw Error("curvature_range: cannot sample away from the breakpoints");
  }
  x_out = x;

  CurvatureTensor4 R;
  try {
    R = riemann_at(m, x);
  } catch (const DegenerateMetricError& e) {
    throw DegenerateMetricError(std::string(e.what()) + " at sample " + point_str(x),
                                e.min_eigenvalue);
  }

  std::vector<double> ks;
  ks.reserve(spec.planes_per_point);
  for (int p = 0; p < spec.planes_per_point; ++p) {
    for (int tries = 0;; ++tries) {
      Eigen::VectorXd a(m.dim), b(m.dim);
      for (int i = 0; i < m.dim; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
      }
      try {
        ks.push_back(sectional_from(R, a, b));
        break;
      } catch (const DegeneratePlaneError&) {
        if (tries > 50) throw;
      }
    }
  }
  return ks;
}

struct SweepData {
  std::vector<Eigen::VectorXd> pts;
  std::vector<std::vector<double>> ks;
};

SweepData run_sweep(const ChartMetric& m, const RangeSpec& spec,
                    const std::vector<double>& knots) {
  if (spec.points < 1 || spec.planes_per_point < 1)
    throw Error("curvature_range: need at least one point and one plane");
  SweepData data;
  data.pts.resize(spec.points);
  data.ks.resize(spec.points);

  bool failed = false;
  std::string msg;
  double min_eig = 0.0;
  bool degenerate = false;

  auto body = [&](int i) {
    try {
      data.ks[i] = point_samples(m, spec, knots, i, data.pts[i]);
    } catch (const DegenerateMetricError& e) {
#pragma omp critical
      if (!failed) {
        failed = true;
        degenerate = true;
        msg = e.what();
        min_eig = e.min_eigenvalue;
      }
    } catch (const std::exception& e) {
#pragma omp critical
      if (!failed) {
        failed = true;
        msg = e.what();
      }
    }
  };

  if (spec.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.points; ++i) body(i);
  } else {
    for (int i = 0; i < spec.points; ++i) body(i);
  }

  if (failed) {
    if (degenerate) throw DegenerateMetricError(msg, min_eig);
    throw Error(msg);
  }
  return data;
}

PinchReport range_from_sweep(const ChartMetric& m, const RangeSpec& spec,
                             const std::vector<double>& knots) {
  SweepData data = run_sweep(m, spec, knots);
  PinchReport rep;
  rep.label = m.name;
  rep.points = spec.points;
  rep.planes_per_point = spec.planes_per_point;
  rep.seed = spec.seed;
  rep.target = spec.target;
  rep.K_min = std::numeric_limits<double>::infinity();
  rep.K_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.points; ++i) {
    for (double k : data.ks[i]) {
      if (k < rep.K_min) {
        rep.K_min = k;
        rep.argmin_point = data.pts[i];
      }
      if (k > rep.K_max) {
        rep.K_max = k;
        rep.argmax_point = data.pts[i];
      }
    }
  }
  if (spec.target)
    rep.verdict = rep.K_min > (*spec.target)[0] && rep.K_max < (*spec.target)[1];
  return rep;
}

}  // namespace

PinchReport curvature_range(const ChartMetric& m, const RangeSpec& spec) {
  return range_from_sweep(m, spec, {});
}

PinchReport curvature_range(const PiecewiseWarpMetric& m, const RangeSpec& spec) {
  std::vector<double> knots(PiecewiseWarpMetric::knots.begin(),
                            PiecewiseWarpMetric::knots.end());
  PinchReport rep = range_from_sweep(m.chart(), spec, knots);

  // generating-term extrema, available when every branch is a warped product
  bool warped = m.eta.has_value() || m.gluing.is_identity;
  if (!warped || !m.sigma_N.constant_curvature) return rep;
  const double K1 = *m.sigma_N.constant_curvature;
  TermBounds agg;
  agg.active = {true, true, m.sigma_N.dim > 1, false, true};
  agg.lo.fill(std::numeric_limits<double>::infinity());
  agg.hi.fill(-std::numeric_limits<double>::infinity());
  const int nT = 256;
  for (int k = 1; k <= 5; ++k) {
    auto [p1, p2] = rescaled_warps(m, k);
    for (int j = 0; j <= nT; ++j) {
      double T = p1.t_lo + (p1.t_hi - p1.t_lo) * j / nT;
      auto tv = warp_terms(p1, p2, T, K1, 0.0);
      for (int s = 0; s < 5; ++s) {
        if (!agg.active[s]) continue;
        agg.lo[s] = std::min(agg.lo[s], tv[s]);
        agg.hi[s] = std::max(agg.hi[s], tv[s]);
      }
    }
  }
  rep.terms = agg;
  rep.has_terms = true;
  return rep;
}

std::vector<double> curvature_samples(const ChartMetric& m, const RangeSpec& spec) {
  SweepData data = run_sweep(m, spec, {});
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(spec.points) * spec.planes_per_point);
  for (const auto& ks : data.ks) flat.insert(flat.end(), ks.begin(), ks.end());
  return flat;
}

std::vector<double> curvature_samples(const PiecewiseWarpMetric& m,
                                      const RangeSpec& spec) {
  std::vector<double> knots(PiecewiseWarpMetric::knots.begin(),
                            PiecewiseWarpMetric::knots.end());
  SweepData data = run_sweep(m.chart(), spec, knots);
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(spec.points) * spec.planes_per_point);
  for (const auto& ks : data.ks) flat.insert(flat.end(), ks.begin(), ks.end());
  return flat;
}

double rescaling_isometry_residual(const ChartMetric& sigma_N, double r,
                                   std::uint64_t seed, int samples) {
  const double alpha = r / 6.0;
  ChartMetric rho = build_rho_r(r, sigma_N);
  ChartMetric tube = tube_metric(sigma_N, 6.0 * alpha);
  Rng rng(seed);
  const int n = rho.dim;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    TangentPlane q;
    q.point = sample_point(rho.domain, rng);
    q.a = Eigen::VectorXd(n);
    q.b = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
      q.a[i] = rng.normal();
      q.b[i] = rng.normal();
    }
    TangentPlane qt = q;  // push forward through t -> alpha t
    qt.point[n - 1] *= alpha;
    qt.a[n - 1] *= alpha;
    qt.b[n - 1] *= alpha;
    worst = std::max(worst, std::abs(sectional_at(rho, q) - sectional_at(tube, qt)));
  }
  return worst;
}

RSweepReport find_min_r(const std::function<PiecewiseWarpMetric(double, double)>& builder,
                        double eps, const std::vector<double>& r_grid,
                        const std::vector<double>& s_values, const RangeSpec& spec) {
  if (!(eps > 0.0)) throw Error("find_min_r: eps must be positive");
  if (r_grid.empty()) throw Error("find_min_r: empty r grid");
  for (size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1]))
      throw Error("find_min_r: r grid must be strictly increasing");
  if (s_values.empty()) throw Error("find_min_r: empty s list");

  RSweepReport rep;
  rep.eps = eps;
  rep.s_values = s_values;
  RangeSpec rs = spec;
  rs.target = std::array<double, 2>{-1.0 - eps, -1.0 + eps};

  for (double r : r_grid) {
    RSweepEntry e;
    e.r = r;
    for (double s : s_values) {
      PinchReport pr = curvature_range(builder(r, s), rs);
      pr.parameter = r;
      e.pass = e.pass && pr.verdict;
      e.worst_dev =
          std::max(e.worst_dev, std::max(deviation(pr.K_min), deviation(pr.K_max)));
      e.per_s.push_back(std::move(pr));
    }
    rep.table.push_back(std::move(e));
  }

  size_t first = rep.table.size();
  for (size_t i = rep.table.size(); i-- > 0 && rep.table[i].pass;) first = i;
  if (first < rep.table.size()) {
    rep.found = true;
    rep.r_star = rep.table[first].r;
  }
  return rep;
}

}  // namespace warpcurv
