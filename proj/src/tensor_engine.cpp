#include "warpcurv/tensor_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace warpcurv {

double CurvatureTensor4::Residuals::worst() const {
  return std::max(std::max(antisym_ab, antisym_cd), std::max(pair_sym, bianchi));
}

Eigen::MatrixXd solve_metric(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rhs,
                             const std::string& context) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    double mineig = es.eigenvalues().minCoeff();
    std::ostringstream os;
    os << context << ": metric not positive definite (min eigenvalue " << mineig << ")";
    throw DegenerateMetricError(os.str(), mineig);
  }
  return llt.solve(rhs);
}

Christoffels christoffel_from(const MetricJet1& jet) {
  const int n = static_cast<int>(jet.g.rows());
  // Gamma^k_ij = 1/2 g^{km} (d_i g_jm + d_j g_im - d_m g_ij)
  Eigen::MatrixXd ginv =
      solve_metric(jet.g, Eigen::MatrixXd::Identity(n, n), "christoffel");
  Christoffels G;
  G.n = n;
  G.v.assign(static_cast<size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += ginv(k, m) * (jet.dg[i](j, m) + jet.dg[j](i, m) - jet.dg[m](i, j));
        G.at(k, i, j) = 0.5 * s;
        G.at(k, j, i) = 0.5 * s;
      }
  return G;
}

Christoffels christoffel_at(const ChartMetric& m, const Eigen::VectorXd& x) {
  return christoffel_from(metric_jet1(m, x));
}

CurvatureTensor4 riemann_at(const ChartMetric& m, const Eigen::VectorXd& x) {
  MetricJet2 jet = metric_jet2(m, x);
  const int n = m.dim;

  Eigen::MatrixXd ginv = solve_metric(jet.g, Eigen::MatrixXd::Identity(n, n), m.name);

  // Gamma and its coordinate derivatives; d_a g^{-1} = -g^{-1} (d_a g) g^{-1}
  Christoffels G = christoffel_from(jet);
  std::vector<Christoffels> dG(n);
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd dginv = -ginv * jet.dg[a] * ginv;
    dG[a].n = n;
    dG[a].v.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int mm = 0; mm < n; ++mm) {
            s += dginv(k, mm) * (jet.dg[i](j, mm) + jet.dg[j](i, mm) - jet.dg[mm](i, j));
            s += ginv(k, mm) *
                 (jet.ddg[a][i](j, mm) + jet.ddg[a][j](i, mm) - jet.ddg[a][mm](i, j));
          }
          dG[a].at(k, i, j) = 0.5 * s;
          dG[a].at(k, j, i) = 0.5 * s;
        }
  }

  // R_abc^l = d_b Gamma^l_ac - d_a Gamma^l_bc + Gamma^m_ac Gamma^l_bm
  //           - Gamma^m_bc Gamma^l_am ; lower with g_ld
  CurvatureTensor4 R;
  R.n = n;
  R.point = x;
  R.g = jet.g;
  R.v.assign(static_cast<size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        for (int l = 0; l < n; ++l) {
          double up = dG[b].at(l, a, c) - dG[a].at(l, b, c);
          for (int mm = 0; mm < n; ++mm)
            up += G.at(mm, a, c) * G.at(l, b, mm) - G.at(mm, b, c) * G.at(l, a, mm);
          for (int d = 0; d < n; ++d)
            R.v[((a * n + b) * n + c) * n + d] += jet.g(l, d) * up;
        }
      }
  return R;
}

CurvatureTensor4::Residuals CurvatureTensor4::symmetry_residuals() const {
  Residuals r;
  r.scale = 0.0;
  for (double x : v) r.scale = std::max(r.scale, std::abs(x));
  if (r.scale == 0.0) r.scale = 1.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double x = at(a, b, c, d);
          r.antisym_ab = std::max(r.antisym_ab, std::abs(x + at(b, a, c, d)));
          r.antisym_cd = std::max(r.antisym_cd, std::abs(x + at(a, b, d, c)));
          r.pair_sym = std::max(r.pair_sym, std::abs(x - at(c, d, a, b)));
          r.bianchi =
              std::max(r.bianchi, std::abs(x + at(b, c, a, d) + at(c, a, b, d)));
        }
  return r;
}

double sectional_from(const CurvatureTensor4& R, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b) {
  const int n = R.n;
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (a[i] == 0.0 && b[i] == 0.0) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          num += R.at(i, j, c, d) * a[i] * b[j] * a[c] * b[d];
    }
  double aa = a.dot(R.g * a), bb = b.dot(R.g * b), ab = a.dot(R.g * b);
  double gram = aa * bb - ab * ab;
  if (!(gram > 1e-12 * std::max(1.0, aa * bb)))
    throw DegeneratePlaneError("sectional: degenerate plane (Gram determinant ~ 0)");
  return num / gram;
}

double sectional_at(const ChartMetric& m, const TangentPlane& plane) {
  CurvatureTensor4 R = riemann_at(m, plane.point);
  return sectional_from(R, plane.a, plane.b);
}

CurvatureOperator curvature_operator_at(const ChartMetric& m, const Eigen::VectorXd& x) {
  CurvatureTensor4 R = riemann_at(m, x);
  const int n = m.dim;
  CurvatureOperator op;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) op.pairs.emplace_back(i, j);
  const int N = static_cast<int>(op.pairs.size());
  op.bilinear.setZero(N, N);
  op.gram.setZero(N, N);
  for (int p = 0; p < N; ++p) {
    auto [a, b] = op.pairs[p];
    for (int q = 0; q < N; ++q) {
      auto [c, d] = op.pairs[q];
      op.bilinear(p, q) = R.at(a, b, c, d);
      op.gram(p, q) = R.g(a, c) * R.g(b, d) - R.g(a, d) * R.g(b, c);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(op.gram);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetricError(m.name + ": Lambda^2 Gram not positive definite", 0.0);
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(N, N));
  op.normalized = Linv * op.bilinear * Linv.transpose();
  op.normalized = 0.5 * (op.normalized + op.normalized.transpose()).eval();
  return op;
}

Eigen::VectorXd CurvatureOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double koszul_residual(const ChartMetric& m, const Eigen::VectorXd& x) {
  Christoffels G = christoffel_at(m, x);
  const int n = m.dim;
  Eigen::MatrixXd g = m.components(x);

  // independent derivative estimate: fixed-step central differences on the
  // raw evaluator, not the jet used to build Gamma
  std::vector<Eigen::MatrixXd> dg(n);
  for (int a = 0; a < n; ++a) {
    double h = std::max(1e-5, std::abs(x[a]) * 1e-7);
    Eigen::VectorXd xp = x, xm = x;
    const Axis& ax = m.domain.axes[a];
    if (!ax.periodic) {
      if (x[a] + h > ax.hi) {
        xp[a] = x[a];
        xm[a] = x[a] - h;
      } else if (x[a] - h < ax.lo) {
        xp[a] = x[a] + h;
        xm[a] = x[a];
      } else {
        xp[a] = x[a] + h;
        xm[a] = x[a] - h;
      }
    } else {
      xp[a] = x[a] + h;
      xm[a] = x[a] - h;
    }
    dg[a] = (m.components(xp) - m.components(xm)) / (xp[a] - xm[a]);
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = 0.0;
        for (int l = 0; l < n; ++l) lhs += 2.0 * g(k, l) * G.at(l, j, i);
        double rhs = dg[i](j, k) + dg[j](i, k) - dg[k](i, j);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

}  // namespace warpcurv
