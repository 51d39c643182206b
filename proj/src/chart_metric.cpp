#include "warpcurv/chart_metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace warpcurv {

bool Box::contains(const Eigen::VectorXd& x, double pad) const {
  if (x.size() != dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    if (axes[a].periodic) continue;
    if (x[a] < axes[a].lo + pad || x[a] > axes[a].hi - pad) return false;
  }
  return true;
}

Eigen::MatrixXd ChartMetric::components(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd g(dim, dim);
  eval(x.data(), g.data());
  // row-major write into column-major storage is harmless: g is symmetric,
  // but transpose anyway to keep asymmetric evaluator bugs visible in tests
  return g.transpose();
}

void ChartMetric::require_inside(const Eigen::VectorXd& x) const {
  if (!domain.contains(x)) {
    std::ostringstream os;
    os << name << ": point outside chart domain: [";
    for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << "]";
    throw DomainError(os.str());
  }
}

ChartMetric make_blackbox_metric(int dim, Box box, std::string name, EvalFn eval,
                                 double central_step) {
  ChartMetric m;
  m.dim = dim;
  m.domain = std::move(box);
  m.scheme = DerivScheme::central;
  m.central_step = central_step;
  m.name = std::move(name);
  m.eval = std::move(eval);
  return m;
}

namespace {

// ---- forward mode -------------------------------------------------------

MetricJet2 jet2_forward(const ChartMetric& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  MetricJet2 out;
  out.g.setZero(n, n);
  out.dg.assign(n, Eigen::MatrixXd::Zero(n, n));
  out.ddg.assign(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));

  std::vector<Dual2> xs(n), gs(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      for (int i = 0; i < n; ++i) xs[i] = Dual2(x[i]);
      xs[a].v.d = xs[a].v.d + 1.0;  // inner seed on axis a
      xs[b].d.v = xs[b].d.v + 1.0;  // outer seed on axis b
      m.eval_dual(xs.data(), gs.data());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Dual2& c = gs[i * n + j];
          if (a == 0 && b == 0) out.g(i, j) = c.v.v;
          out.dg[a](i, j) = c.v.d;
          out.dg[b](i, j) = c.d.v;
          out.ddg[a][b](i, j) = c.d.d;
          out.ddg[b][a](i, j) = c.d.d;
        }
    }
  }
  return out;
}

MetricJet1 jet1_forward(const ChartMetric& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  MetricJet1 out;
  out.g.setZero(n, n);
  out.dg.assign(n, Eigen::MatrixXd::Zero(n, n));

  std::vector<Dual2> xs(n), gs(n * n);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) xs[i] = Dual2(x[i]);
    xs[a].v.d = xs[a].v.d + 1.0;
    m.eval_dual(xs.data(), gs.data());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Dual2& c = gs[i * n + j];
        if (a == 0) out.g(i, j) = c.v.v;
        out.dg[a](i, j) = c.v.d;
      }
  }
  return out;
}

// ---- central differences ------------------------------------------------

// one-dimensional stencil: offsets (in units of h) with weights for f' and f''
struct Stencil {
  std::array<int, 3> off;
  std::array<double, 3> w1;  // multiply by 1/h
  std::array<double, 3> w2;  // multiply by 1/h^2
};

Stencil pick_stencil(const Axis& ax, double x, double h, const std::string& name) {
  if (ax.periodic) return {{-1, 0, 1}, {-0.5, 0.0, 0.5}, {1.0, -2.0, 1.0}};
  bool room_up = x + h <= ax.hi;
  bool room_dn = x - h >= ax.lo;
  if (room_up && room_dn) return {{-1, 0, 1}, {-0.5, 0.0, 0.5}, {1.0, -2.0, 1.0}};
  if (room_up && x + 2 * h <= ax.hi)  // one-sided, first order for f''
    return {{0, 1, 2}, {-1.5, 2.0, -0.5}, {1.0, -2.0, 1.0}};
  if (room_dn && x - 2 * h >= ax.lo)
    return {{0, -1, -2}, {1.5, -2.0, 0.5}, {1.0, -2.0, 1.0}};
  throw DomainError(name + ": stencil out of domain (axis width below 2h near boundary)");
}

double step_for(const ChartMetric& m, double xa) {
  return std::max(m.central_step, std::abs(xa) * 1e-7);
}

Eigen::MatrixXd eval_at(const ChartMetric& m, Eigen::VectorXd x) {
  Eigen::MatrixXd g(m.dim, m.dim);
  m.eval(x.data(), g.data());
  return g.transpose();
}

MetricJet2 jet2_central(const ChartMetric& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  MetricJet2 out;
  out.g = eval_at(m, x);
  out.dg.assign(n, Eigen::MatrixXd::Zero(n, n));
  out.ddg.assign(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));

  std::vector<Stencil> st(n);
  std::vector<double> h(n);
  for (int a = 0; a < n; ++a) {
    h[a] = step_for(m, x[a]);
    st[a] = pick_stencil(m.domain.axes[a], x[a], h[a], m.name);
  }

  for (int a = 0; a < n; ++a) {
    std::array<Eigen::MatrixXd, 3> gs;
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd xp = x;
      xp[a] += st[a].off[k] * h[a];
      gs[k] = eval_at(m, xp);
    }
    for (int k = 0; k < 3; ++k) {
      out.dg[a] += (st[a].w1[k] / h[a]) * gs[k];
      out.ddg[a][a] += (st[a].w2[k] / (h[a] * h[a])) * gs[k];
    }
  }

  // mixed partials: tensor the two first-derivative stencils
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
      for (int ka = 0; ka < 3; ++ka) {
        if (st[a].w1[ka] == 0.0) continue;
        for (int kb = 0; kb < 3; ++kb) {
          if (st[b].w1[kb] == 0.0) continue;
          Eigen::VectorXd xp = x;
          xp[a] += st[a].off[ka] * h[a];
          xp[b] += st[b].off[kb] * h[b];
          acc += (st[a].w1[ka] / h[a]) * (st[b].w1[kb] / h[b]) * eval_at(m, xp);
        }
      }
      out.ddg[a][b] = acc;
      out.ddg[b][a] = acc;
    }
  return out;
}

MetricJet1 jet1_central(const ChartMetric& m, const Eigen::VectorXd& x) {
  const int n = m.dim;
  MetricJet1 out;
  out.g = eval_at(m, x);
  out.dg.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int a = 0; a < n; ++a) {
    double h = step_for(m, x[a]);
    Stencil st = pick_stencil(m.domain.axes[a], x[a], h, m.name);
    for (int k = 0; k < 3; ++k) {
      if (st.w1[k] == 0.0) continue;
      Eigen::VectorXd xp = x;
      xp[a] += st.off[k] * h;
      out.dg[a] += (st.w1[k] / h) * eval_at(m, xp);
    }
  }
  return out;
}

}  // namespace

MetricJet1 metric_jet1(const ChartMetric& m, const Eigen::VectorXd& x) {
  m.require_inside(x);
  if (m.scheme == DerivScheme::forward) {
    if (!m.eval_dual) throw Error(m.name + ": forward scheme requested but no dual evaluator");
    return jet1_forward(m, x);
  }
  return jet1_central(m, x);
}

MetricJet2 metric_jet2(const ChartMetric& m, const Eigen::VectorXd& x) {
  m.require_inside(x);
  if (m.scheme == DerivScheme::forward) {
    if (!m.eval_dual) throw Error(m.name + ": forward scheme requested but no dual evaluator");
    return jet2_forward(m, x);
  }
  return jet2_central(m, x);
}

Eigen::VectorXd sample_point(const Box& box, Rng& rng, double pad_frac) {
  Eigen::VectorXd x(box.dim());
  for (int a = 0; a < box.dim(); ++a) {
    const Axis& ax = box.axes[a];
    double pad = ax.periodic ? 0.0 : pad_frac * ax.width();
    x[a] = rng.uniform(ax.lo + pad, ax.hi - pad);
  }
  return x;
}

double periodicity_residual(const ChartMetric& m, Rng& rng, int npoints) {
  double worst = 0.0;
  for (int k = 0; k < npoints; ++k) {
    Eigen::VectorXd x = sample_point(m.domain, rng);
    Eigen::MatrixXd g0 = m.components(x);
    for (int a = 0; a < m.dim; ++a) {
      if (!m.domain.axes[a].periodic) continue;
      Eigen::VectorXd xp = x;
      xp[a] += m.domain.axes[a].width();
      worst = std::max(worst, (m.components(xp) - g0).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace warpcurv
