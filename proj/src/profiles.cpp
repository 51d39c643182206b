#include "warpcurv/profiles.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "warpcurv/errors.hpp"

namespace warpcurv {

const QuadratureRule& gauss_legendre(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int order, int panels) {
  const QuadratureRule& rule = gauss_legendre(order);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double pa = a + (b - a) * p / panels;
    double pb = a + (b - a) * (p + 1) / panels;
    double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += acc * half;
  }
  return total;
}

namespace {

// bump kernel on (0,1); q = x(1-x) small enough underflows exp anyway, the
// guard just keeps 1/q out of the denormal range
double bump(double x) {
  double q = x * (1.0 - x);
  if (q < 1.0 / 700.0) return 0.0;
  return std::exp(-1.0 / q);
}

double bump_d1(double x) {
  double q = x * (1.0 - x);
  if (q < 1.0 / 700.0) return 0.0;
  return std::exp(-1.0 / q) * (1.0 - 2.0 * x) / (q * q);
}

double bump_mass() {
  static const double z = integrate([](double x) { return bump(x); }, 0.0, 1.0, 48, 8);
  return z;
}

// normalized bump integral: exactly 0 / 1 off the ends, symmetric evaluation
// for conditioning near 1
double bump_cdf(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double z = bump_mass();
  if (u <= 0.5) return integrate([](double x) { return bump(x); }, 0.0, u, 48) / z;
  return 1.0 - integrate([](double x) { return bump(x); }, u, 1.0, 48) / z;
}

}  // namespace

ScalarProfile smooth_step(double t0, double t1, double y0, double y1, double margin) {
  if (!(t1 > t0)) throw ProfileError("smooth_step: need t1 > t0");
  if (!(margin > 0.0) || !(margin < 0.5 * (t1 - t0)))
    throw ProfileError("smooth_step: margin must lie in (0, (t1-t0)/2)");
  const double a = t0 + margin, width = t1 - t0 - 2.0 * margin;
  ScalarProfile p;
  p.name = "step";
  p.value = [=](double t) {
    double u = (t - a) / width;
    if (u <= 0.0) return y0;  // branch, not algebra: plateaus bitwise exact
    if (u >= 1.0) return y1;
    return y0 + (y1 - y0) * bump_cdf(u);
  };
  p.d1 = [=](double t) {
    double u = (t - a) / width;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return (y1 - y0) * bump(u) / bump_mass() / width;
  };
  p.d2 = [=](double t) {
    double u = (t - a) / width;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return (y1 - y0) * bump_d1(u) / bump_mass() / (width * width);
  };
  return p;
}

ScalarProfile constant_profile(double c) {
  ScalarProfile p;
  p.name = "const";
  p.value = [c](double) { return c; };
  p.d1 = [](double) { return 0.0; };
  p.d2 = [](double) { return 0.0; };
  return p;
}

ScalarProfile linear_ramp(double t0, double t1, double y0, double y1) {
  if (!(t1 > t0)) throw ProfileError("linear_ramp: need t1 > t0");
  ScalarProfile p;
  p.name = "ramp";
  p.value = [=](double t) {
    if (t <= t0) return y0;
    if (t >= t1) return y1;
    return y0 + (y1 - y0) * (t - t0) / (t1 - t0);
  };
  // right-sided at the kinks: d1(t0) carries the inside slope so a jet
  // comparison evaluated exactly at t0 sees the order-1 break
  p.d1 = [=](double t) {
    if (t < t0 || t >= t1) return 0.0;
    return (y1 - y0) / (t1 - t0);
  };
  p.d2 = [](double) { return 0.0; };
  return p;
}

double profile_derivative_residual(const ScalarProfile& p, double t_lo, double t_hi,
                                   int samples) {
  double worst = 0.0;
  const double h = 1e-5;
  for (int i = 0; i <= samples; ++i) {
    double t = t_lo + (t_hi - t_lo) * i / samples;
    double cd1 = (p.value(t + h) - p.value(t - h)) / (2 * h);
    double cd2 = (p.value(t + h) - 2 * p.value(t) + p.value(t - h)) / (h * h);
    double scale = std::max(1.0, std::abs(p.value(t)));
    worst = std::max(worst, std::abs(cd1 - p.d1(t)) / scale);
    worst = std::max(worst, std::abs(cd2 - p.d2(t)) / scale);
  }
  return worst;
}

}  // namespace warpcurv
