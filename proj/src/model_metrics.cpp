#include "warpcurv/model_metrics.hpp"

namespace warpcurv {

namespace {

template <class S>
void fill_zero(S* g, int n) {
  for (int i = 0; i < n * n; ++i) g[i] = S(0.0);
}

}  // namespace

ChartMetric euclidean(int n, double half_width) {
  Box box;
  box.axes.assign(n, Axis{-half_width, half_width, false});
  auto m = make_chart_metric(n, box, "euclidean", [n](const auto* /*x*/, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    fill_zero(g, n);
    for (int i = 0; i < n; ++i) g[i * n + i] = S(1.0);
  });
  m.constant_curvature = 0.0;
  return m;
}

ChartMetric circle(double period) {
  Box box;
  box.axes = {Axis{0.0, period, true}};
  auto m = make_chart_metric(1, box, "circle", [](const auto* /*x*/, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    g[0] = S(1.0);
  });
  m.constant_curvature = 0.0;  // no 2-planes; kept for uniformity
  return m;
}

ChartMetric flat_torus(double period1, double period2) {
  Box box;
  box.axes = {Axis{0.0, period1, true}, Axis{0.0, period2, true}};
  auto m = make_chart_metric(2, box, "flat-torus", [](const auto* /*x*/, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    g[0] = S(1.0);
    g[1] = S(0.0);
    g[2] = S(0.0);
    g[3] = S(1.0);
  });
  m.constant_curvature = 0.0;
  return m;
}

ChartMetric polar_plane() {
  Box box;
  box.axes = {Axis{0.2, 3.0, false}, Axis{0.0, 2.0 * M_PI, true}};
  auto m = make_chart_metric(2, box, "polar-plane", [](const auto* x, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    g[0] = S(1.0);
    g[1] = S(0.0);
    g[2] = S(0.0);
    g[3] = x[0] * x[0];
  });
  m.constant_curvature = 0.0;
  return m;
}

ChartMetric round_sphere() {
  Box box;
  box.axes = {Axis{0.3, M_PI - 0.3, false}, Axis{0.0, 2.0 * M_PI, true}};
  auto m = make_chart_metric(2, box, "round-sphere", [](const auto* x, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    auto s = sin(x[0]);
    g[0] = S(1.0);
    g[1] = S(0.0);
    g[2] = S(0.0);
    g[3] = s * s;
  });
  m.constant_curvature = 1.0;
  return m;
}

ChartMetric hyperbolic_half_space(int n) {
  Box box;
  box.axes.assign(n - 1, Axis{-2.0, 2.0, false});
  box.axes.push_back(Axis{0.4, 3.0, false});
  auto m = make_chart_metric(n, box, "hyperbolic-half-space", [n](const auto* x, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    fill_zero(g, n);
    auto w = 1.0 / (x[n - 1] * x[n - 1]);
    for (int i = 0; i < n; ++i) g[i * n + i] = S(1.0) * w;
  });
  m.constant_curvature = -1.0;
  return m;
}

ChartMetric hyperbolic_half_plane() {
  ChartMetric m = hyperbolic_half_space(2);
  m.name = "hyperbolic-half-plane";
  return m;
}

ChartMetric hyperbolic_cylinder(double x2_half_width) {
  Box box;
  box.axes = {Axis{0.0, 2.0 * M_PI, true}, Axis{-x2_half_width, x2_half_width, false}};
  auto m = make_chart_metric(2, box, "hyperbolic-cylinder", [](const auto* x, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    auto c = cosh(x[1]);
    g[0] = c * c;
    g[1] = S(0.0);
    g[2] = S(0.0);
    g[3] = S(1.0);
  });
  m.constant_curvature = -1.0;
  return m;
}

ChartMetric bumpy_torus(double amp) {
  Box box;
  box.axes = {Axis{0.0, 2.0 * M_PI, true}, Axis{0.0, 2.0 * M_PI, true}};
  auto m = make_chart_metric(2, box, "bumpy-torus", [amp](const auto* x, auto* g) {
    using S = std::decay_t<decltype(g[0])>;
    g[0] = 1.0 + amp * sin(x[0]);
    g[1] = S(0.0);
    g[2] = S(0.0);
    g[3] = S(1.0);
  });
  return m;
}

ChartMetric as_blackbox(const ChartMetric& m, double central_step) {
  ChartMetric out = m;
  out.eval_dual = nullptr;
  out.scheme = DerivScheme::central;
  out.central_step = central_step;
  out.name = m.name + "-blackbox";
  return out;
}

}  // namespace warpcurv
