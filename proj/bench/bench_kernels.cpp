// Wall-clock comparison of the serial reference kernels against the OpenMP
// ones, on the two hot paths: curvature sampling sweeps and heat-flow
// stencils. Also confirms the execution paths agree bitwise per workload.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "warpcurv/families.hpp"
#include "warpcurv/heat_flow.hpp"
#include "warpcurv/model_metrics.hpp"
#include "warpcurv/pinching.hpp"

using namespace warpcurv;

namespace {

template <class F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool bitwise) {
  std::printf("%-34s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              bitwise ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  {
    ChartMetric rho = build_rho_r(9.0, hyperbolic_cylinder());
    RangeSpec spec;
    spec.points = 400;
    spec.planes_per_point = 8;
    spec.seed = 17;

    std::vector<double> ser, par;
    RangeSpec s1 = spec, s2 = spec;
    s1.exec = Exec::serial;
    s2.exec = Exec::parallel;
    double t_ser = best_ms([&] { ser = curvature_samples(rho, s1); }, 3);
    double t_par = best_ms([&] { par = curvature_samples(rho, s2); }, 3);
    report("curvature sweep (400 pts x 8)", t_ser, t_par, ser == par);
  }

  {
    ClosedCurve c = perturbed_loop(bumpy_torus(), 8192, {1, 0},
                                   Eigen::VectorXd::Zero(2), 1, 0.3);
    Eigen::MatrixXd tser, tpar;
    double t_ser = best_ms([&] { tser = tension_field(c, Exec::serial); }, 5);
    double t_par = best_ms([&] { tpar = tension_field(c, Exec::parallel); }, 5);
    report("tension field (N = 8192)", t_ser, t_par, tser == tpar);
  }

  {
    auto run_steps = [](Exec exec) {
      ClosedCurve c = perturbed_loop(bumpy_torus(), 2048, {1, 0},
                                     Eigen::VectorXd::Zero(2), 1, 0.3);
      double dt = cfl_bound(c);
      for (int s = 0; s < 200; ++s) flow_step(c, dt, exec);
      return c.samples;
    };
    Eigen::MatrixXd ser, par;
    double t_ser = best_ms([&] { ser = run_steps(Exec::serial); }, 3);
    double t_par = best_ms([&] { par = run_steps(Exec::parallel); }, 3);
    report("200 flow steps (N = 2048)", t_ser, t_par, ser == par);
  }

  return 0;
}
