#include "warpcurv/heat_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "warpcurv/errors.hpp"
#include "warpcurv/tensor_engine.hpp"

namespace warpcurv {

namespace {

constexpr double kCflFactor = 0.4;
constexpr double kEnergySlack = 1e-12;

// neighbor rows with the closing increment applied across the seam
Eigen::VectorXd row_next(const ClosedCurve& c, int k) {
  int N = c.n();
  if (k + 1 < N) return c.samples.row(k + 1).transpose();
  return c.samples.row(0).transpose() + c.closure_offset();
}

Eigen::VectorXd row_prev(const ClosedCurve& c, int k) {
  if (k > 0) return c.samples.row(k - 1).transpose();
  return c.samples.row(c.n() - 1).transpose() - c.closure_offset();
}

double max_row_norm(const Eigen::MatrixXd& m) {
  double worst = 0.0;
  for (int k = 0; k < m.rows(); ++k) worst = std::max(worst, m.row(k).norm());
  return worst;
}

void require_admissible(double dt, const ClosedCurve& c) {
  double bound = cfl_bound(c);
  if (dt <= bound * (1.0 + 1e-12)) return;
  std::ostringstream os;
  os << "flow step dt = " << dt << " exceeds the admissible bound 0.4 (2 pi / N)^2 = "
     << bound;
  throw FlowError(os.str());
}

}  // namespace

double ClosedCurve::dtheta() const { return 2.0 * M_PI / n(); }

Eigen::VectorXd ClosedCurve::closure_offset() const {
  Eigen::VectorXd off = Eigen::VectorXd::Zero(target.dim);
  for (int i = 0; i < target.dim; ++i)
    if (target.domain.axes[i].periodic) off[i] = winding[i] * target.domain.axes[i].width();
  return off;
}

ClosedCurve make_closed_curve(ChartMetric target, Eigen::MatrixXd samples,
                              std::vector<int> winding) {
  if (samples.cols() != target.dim)
    throw FlowError("closed curve: sample dimension does not match the target chart");
  if (samples.rows() < 16) throw FlowError("closed curve: need at least 16 samples");
  if (static_cast<int>(winding.size()) != target.dim)
    throw FlowError("closed curve: need one winding entry per axis");
  for (int i = 0; i < target.dim; ++i)
    if (!target.domain.axes[i].periodic && winding[i] != 0)
      throw FlowError("closed curve: nonzero winding on a non-periodic axis");
  if (!samples.allFinite()) throw FlowError("closed curve: samples must be finite");

  ClosedCurve c{std::move(target), std::move(samples), std::move(winding)};
  int N = c.n();
  double mean = 0.0, worst = 0.0;
  for (int k = 0; k < N; ++k) {
    double gap = (row_next(c, k) - c.samples.row(k).transpose()).norm();
    mean += gap;
    worst = std::max(worst, gap);
  }
  mean /= N;
  if (worst > 10.0 * mean)
    throw FlowError("closed curve: sample spacing is too uneven (max gap > 10x mean)");
  return c;
}

ClosedCurve straight_loop(const ChartMetric& target, int n, std::vector<int> winding,
                          const Eigen::VectorXd& base) {
  if (base.size() != target.dim)
    throw FlowError("straight_loop: base point dimension mismatch");
  Eigen::VectorXd off = Eigen::VectorXd::Zero(target.dim);
  for (int i = 0; i < target.dim; ++i)
    if (i < static_cast<int>(winding.size()) && target.domain.axes[i].periodic)
      off[i] = winding[i] * target.domain.axes[i].width();
  Eigen::MatrixXd samples(n, target.dim);
  for (int k = 0; k < n; ++k)
    samples.row(k) = base.transpose() + (static_cast<double>(k) / n) * off.transpose();
  return make_closed_curve(target, std::move(samples), std::move(winding));
}

ClosedCurve perturbed_loop(const ChartMetric& target, int n, std::vector<int> winding,
                           const Eigen::VectorXd& base, int axis, double amplitude) {
  if (axis < 0 || axis >= target.dim) throw FlowError("perturbed_loop: axis out of range");
  ClosedCurve c = straight_loop(target, n, std::move(winding), base);
  for (int k = 0; k < n; ++k)
    c.samples(k, axis) += amplitude * std::sin(2.0 * M_PI * k / n);
  return c;
}

double energy(const ClosedCurve& c, Exec exec) {
  int N = c.n();
  std::vector<double> terms(N);
  for_each_index(N, exec, [&](std::size_t k) {
    Eigen::VectorXd d = row_next(c, static_cast<int>(k)) -
                        c.samples.row(static_cast<int>(k)).transpose();
    Eigen::MatrixXd g = c.target.components(c.samples.row(static_cast<int>(k)).transpose());
    terms[k] = d.dot(g * d);
  });
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += terms[k];  // fixed order, exec-independent
  return 0.5 * sum / c.dtheta();
}

Eigen::MatrixXd tension_field(const ClosedCurve& c, Exec exec) {
  int N = c.n();
  double h = c.dtheta();
  Eigen::MatrixXd tau(N, c.target.dim);
  for_each_index(N, exec, [&](std::size_t ks) {
    int k = static_cast<int>(ks);
    Eigen::VectorXd x = c.samples.row(k).transpose();
    Eigen::VectorXd nx = row_next(c, k), pv = row_prev(c, k);
    Eigen::VectorXd dd = (nx - 2.0 * x + pv) / (h * h);
    Eigen::VectorXd d1 = (nx - pv) / (2.0 * h);
    Christoffels G = christoffel_at(c.target, x);
    for (int i = 0; i < c.target.dim; ++i) {
      double quad = 0.0;
      for (int a = 0; a < c.target.dim; ++a)
        for (int b = 0; b < c.target.dim; ++b) quad += G.at(i, a, b) * d1[a] * d1[b];
      tau(k, i) = dd[i] + quad;
    }
  });
  return tau;
}

double max_tension_norm(const ClosedCurve& c, Exec exec) {
  return max_row_norm(tension_field(c, exec));
}

double cfl_bound(const ClosedCurve& c) {
  double h = c.dtheta();
  return kCflFactor * h * h;
}

void flow_step(ClosedCurve& c, double dt, Exec exec) {
  if (!c.samples.allFinite()) throw BlowUpError("flow_step: curve state is not finite");
  require_admissible(dt, c);
  Eigen::MatrixXd next = c.samples + dt * tension_field(c, exec);
  if (!next.allFinite())
    throw BlowUpError("flow_step: update produced a non-finite sample");
  c.samples.swap(next);
}

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_steps: return "max-steps";
    case FlowStatus::blow_up: return "blow-up";
  }
  return "unknown";
}

FlowResult flow_until(ClosedCurve& c, const FlowParams& p) {
  if (p.max_steps < 1) throw FlowError("flow_until: need at least one step");
  if (!(p.tol > 0.0)) throw FlowError("flow_until: tolerance must be positive");
  if (p.record_every < 1) throw FlowError("flow_until: record_every must be positive");
  double dt = p.dt > 0.0 ? p.dt : cfl_bound(c);
  require_admissible(dt, c);

  FlowResult res;
  if (!c.samples.allFinite()) {
    res.status = FlowStatus::blow_up;
    return res;
  }

  double E = energy(c, p.exec);
  Eigen::MatrixXd tau = tension_field(c, p.exec);
  double tmax = max_row_norm(tau);
  res.trace.rows.push_back({0, E, tmax});
  res.final_energy = E;
  res.final_tension = tmax;
  if (tmax <= p.tol) {
    res.status = FlowStatus::converged;
    return res;
  }

  for (long step = 1; step <= p.max_steps; ++step) {
    Eigen::MatrixXd next = c.samples + dt * tau;
    if (!next.allFinite()) {
      res.status = FlowStatus::blow_up;
      res.steps = step;
      break;
    }
    c.samples.swap(next);

    double Enew = energy(c, p.exec);
    if (!std::isfinite(Enew)) {
      res.status = FlowStatus::blow_up;
      res.steps = step;
      break;
    }
    if (Enew > E + kEnergySlack * std::max(1.0, std::abs(E))) {
      std::ostringstream os;
      os << "flow_until: energy increased at step " << step << " (" << E << " -> "
         << Enew << ")";
      throw FlowError(os.str());
    }
    E = Enew;

    tau = tension_field(c, p.exec);
    tmax = max_row_norm(tau);
    res.final_energy = E;
    res.final_tension = tmax;
    bool terminal = tmax <= p.tol || step == p.max_steps;
    if (step % p.record_every == 0 || terminal)
      res.trace.rows.push_back({step, E, tmax});
    res.steps = step;
    if (tmax <= p.tol) {
      res.status = FlowStatus::converged;
      break;
    }
    if (step == p.max_steps) res.status = FlowStatus::max_steps;
  }
  return res;
}

}  // namespace warpcurv
