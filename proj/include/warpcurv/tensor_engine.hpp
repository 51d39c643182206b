#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "warpcurv/chart_metric.hpp"

// Chart-based curvature oracle. Sign convention: R(a,b)c = D_b D_a c - D_a D_b c
// - D_[b,a] c with R_abcd = <R(a,b)c, d>, which makes K = R(a,b,a,b)/Gram(a,b)
// equal +1 on the unit round sphere.

namespace warpcurv {

struct TangentPlane {
  Eigen::VectorXd point;
  Eigen::VectorXd a, b;
};

struct Christoffels {
  int n = 0;
  std::vector<double> v;  // v[(k*n + i)*n + j] = Gamma^k_ij
  double at(int k, int i, int j) const { return v[(k * n + i) * n + j]; }
  double& at(int k, int i, int j) { return v[(k * n + i) * n + j]; }
};

struct CurvatureTensor4 {
  int n = 0;
  Eigen::VectorXd point;
  Eigen::MatrixXd g;      // metric at the point
  std::vector<double> v;  // v[((a*n + b)*n + c)*n + d] = R_abcd
  double at(int a, int b, int c, int d) const { return v[((a * n + b) * n + c) * n + d]; }

  struct Residuals {
    double antisym_ab = 0, antisym_cd = 0, pair_sym = 0, bianchi = 0;
    double scale = 1;  // max |R_abcd|, for relative comparisons
    double worst() const;
  };
  Residuals symmetry_residuals() const;
};

struct CurvatureOperator {
  std::vector<std::pair<int, int>> pairs;  // basis e_i ^ e_j, i < j
  Eigen::MatrixXd bilinear;                // M[(ab),(cd)] = R_abcd
  Eigen::MatrixXd gram;                    // Lambda^2 Gram of g
  Eigen::MatrixXd normalized;              // L^-1 M L^-T, L = chol(gram)
  Eigen::VectorXd eigenvalues() const;     // spectrum of the operator
};

Christoffels christoffel_at(const ChartMetric& m, const Eigen::VectorXd& x);
Christoffels christoffel_from(const MetricJet1& jet);

CurvatureTensor4 riemann_at(const ChartMetric& m, const Eigen::VectorXd& x);

double sectional_at(const ChartMetric& m, const TangentPlane& plane);
// reuse a computed tensor for several planes at the same point
double sectional_from(const CurvatureTensor4& R, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b);

CurvatureOperator curvature_operator_at(const ChartMetric& m, const Eigen::VectorXd& x);

// max over coordinate triples of |2<Z, D_Y X> - X<Y,Z> - Y<X,Z> + Z<X,Y>|,
// with the metric directional derivatives re-estimated independently of the
// Christoffel assembly (fixed-step central differences)
double koszul_residual(const ChartMetric& m, const Eigen::VectorXd& x);

// solve g y = rhs with a positive-definite check; throws DegenerateMetricError
Eigen::MatrixXd solve_metric(const Eigen::MatrixXd& g, const Eigen::MatrixXd& rhs,
                             const std::string& context);

}  // namespace warpcurv
