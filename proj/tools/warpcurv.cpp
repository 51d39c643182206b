// Command-line driver. Each command reads one JSON config file, writes
// report.json plus CSV tables into --out, and exits 0 on a pass verdict,
// 2 on a fail verdict, 1 on any error. Unknown config keys are rejected
// by name. Reruns with the same config and seed produce byte-identical
// outputs apart from the timestamp field.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "warpcurv/errors.hpp"
#include "warpcurv/families.hpp"
#include "warpcurv/gluing.hpp"
#include "warpcurv/heat_flow.hpp"
#include "warpcurv/model_metrics.hpp"
#include "warpcurv/pinching.hpp"
#include "warpcurv/report.hpp"
#include "warpcurv/rng.hpp"
#include "warpcurv/tensor_engine.hpp"
#include "warpcurv/warp.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace warpcurv;

namespace {

// ---- config access with strict key checking -------------------------------

struct Config {
  const ordered_json& j;
  std::string command;

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    ok.insert("seed");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!ok.count(it.key()))
        throw ConfigError("unknown key \"" + it.key() + "\" in " + command + " config",
                          it.key());
  }

  bool has(const std::string& k) const { return j.contains(k); }

  const ordered_json& at(const std::string& k) const {
    if (!j.contains(k))
      throw ConfigError(command + " config requires key \"" + k + "\"", k);
    return j.at(k);
  }

  double num(const std::string& k) const {
    const auto& v = at(k);
    if (!v.is_number()) throw ConfigError("key \"" + k + "\" must be a number", k);
    return v.get<double>();
  }
  double num(const std::string& k, double dflt) const {
    return has(k) ? num(k) : dflt;
  }

  long integer(const std::string& k) const {
    const auto& v = at(k);
    if (!v.is_number_integer())
      throw ConfigError("key \"" + k + "\" must be an integer", k);
    return v.get<long>();
  }
  long integer(const std::string& k, long dflt) const {
    return has(k) ? integer(k) : dflt;
  }

  std::string str(const std::string& k) const {
    const auto& v = at(k);
    if (!v.is_string()) throw ConfigError("key \"" + k + "\" must be a string", k);
    return v.get<std::string>();
  }
  std::string str(const std::string& k, const std::string& dflt) const {
    return has(k) ? str(k) : dflt;
  }

  std::vector<double> num_list(const std::string& k) const {
    const auto& v = at(k);
    if (!v.is_array()) throw ConfigError("key \"" + k + "\" must be an array", k);
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number())
        throw ConfigError("key \"" + k + "\" must hold numbers", k);
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> int_list(const std::string& k) const {
    const auto& v = at(k);
    if (!v.is_array()) throw ConfigError("key \"" + k + "\" must be an array", k);
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer())
        throw ConfigError("key \"" + k + "\" must hold integers", k);
      out.push_back(e.get<int>());
    }
    return out;
  }
};

// ---- JSON helpers ----------------------------------------------------------

ordered_json json_num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json json_vec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(json_num(v[i]));
  return a;
}

ordered_json to_json(const TermBounds& t) {
  ordered_json j;
  ordered_json lo = ordered_json::array(), hi = ordered_json::array(),
               act = ordered_json::array();
  for (int s = 0; s < 5; ++s) {
    lo.push_back(t.active[static_cast<size_t>(s)]
                     ? json_num(t.lo[static_cast<size_t>(s)])
                     : ordered_json(nullptr));
    hi.push_back(t.active[static_cast<size_t>(s)]
                     ? json_num(t.hi[static_cast<size_t>(s)])
                     : ordered_json(nullptr));
    act.push_back(t.active[static_cast<size_t>(s)]);
  }
  j["lo"] = lo;
  j["hi"] = hi;
  j["active"] = act;
  j["min_active"] = json_num(t.min_active());
  j["max_active"] = json_num(t.max_active());
  j["max_deviation"] = json_num(t.max_deviation());
  return j;
}

ordered_json to_json(const PinchReport& r) {
  ordered_json j;
  j["label"] = r.label;
  j["K_min"] = json_num(r.K_min);
  j["K_max"] = json_num(r.K_max);
  j["argmin_point"] = json_vec(r.argmin_point);
  j["argmax_point"] = json_vec(r.argmax_point);
  j["points"] = r.points;
  j["planes_per_point"] = r.planes_per_point;
  j["seed"] = r.seed;
  if (r.target)
    j["target"] = ordered_json::array({(*r.target)[0], (*r.target)[1]});
  else
    j["target"] = nullptr;
  if (r.has_terms) j["term_bounds"] = to_json(r.terms);
  j["verdict"] = r.verdict;
  return j;
}

ordered_json to_json(const BreakpointReport& b) {
  ordered_json j;
  j["order"] = b.order;
  ordered_json rows = ordered_json::array();
  for (const auto& row : b.rows) {
    ordered_json r;
    r["knot"] = row.knot;
    ordered_json mm = ordered_json::array();
    for (int k = 0; k <= b.order; ++k)
      mm.push_back(json_num(row.mismatch[static_cast<size_t>(k)]));
    r["mismatch"] = mm;
    rows.push_back(r);
  }
  j["rows"] = rows;
  ordered_json tol = ordered_json::array();
  for (int k = 0; k <= b.order; ++k)
    tol.push_back(b.tolerance[static_cast<size_t>(k)]);
  j["tolerance"] = tol;
  j["pass"] = b.pass;
  return j;
}

// ---- registries ------------------------------------------------------------

ChartMetric named_metric(const Config& c, const std::string& key,
                         const std::string& name) {
  if (name == "flat-torus") return flat_torus();
  if (name == "round-sphere") return round_sphere();
  if (name == "polar-plane") return polar_plane();
  if (name == "hyperbolic-plane") return hyperbolic_half_plane();
  if (name == "hyperbolic-space-3") return hyperbolic_half_space(3);
  if (name == "hyperbolic-cylinder") return hyperbolic_cylinder();
  if (name == "bumpy-torus") return bumpy_torus();
  if (name == "circle") return circle();
  if (name == "euclidean-2") return euclidean(2);
  throw ConfigError("unknown metric \"" + name + "\" for key \"" + key + "\"" +
                        " in " + c.command + " config",
                    key);
}

ChartMetric factor_metric(const Config& c) {
  return named_metric(c, "factor", c.str("factor", "hyperbolic-cylinder"));
}

TwistSpec twist_from(const Config& c, int dim) {
  TwistSpec spec;
  spec.kind = twist_kind_from(c.str("twist", "identity"));
  spec.dim = dim;
  spec.angle = c.num("angle", 0.0);
  spec.radius = c.num("radius", 1.0);
  spec.center = Eigen::VectorXd::Zero(dim - 1);
  if (c.has("center")) {
    auto v = c.num_list("center");
    if (static_cast<int>(v.size()) != dim - 1)
      throw ConfigError("key \"center\" must list the leading " +
                            std::to_string(dim - 1) + " coordinates",
                        "center");
    for (size_t i = 0; i < v.size(); ++i)
      spec.center[static_cast<int>(i)] = v[i];
  }
  return spec;
}

RangeSpec range_from(const Config& c, std::uint64_t seed) {
  RangeSpec s;
  s.points = static_cast<int>(c.integer("points", 100));
  s.planes_per_point = static_cast<int>(c.integer("planes_per_point", 20));
  s.knot_exclusion = c.num("knot_exclusion", 0.05);
  s.seed = seed;
  if (c.has("target")) {
    auto t = c.num_list("target");
    if (t.size() != 2)
      throw ConfigError("key \"target\" must be [lo, hi]", "target");
    s.target = std::array<double, 2>{t[0], t[1]};
  }
  return s;
}

WarpFamily family_from(const Config& c) {
  std::string name = c.str("family");
  auto bounds = [&](const char* key,
                    std::array<double, 2> dflt) -> std::array<double, 2> {
    if (!c.has(key)) return dflt;
    auto v = c.num_list(key);
    if (v.size() != 2)
      throw ConfigError(std::string("key \"") + key + "\" must be [lo, hi]", key);
    return {v[0], v[1]};
  };
  double a = c.num("a", 1.0), b = c.num("b", 2.0);
  if (name == "exp")
    return exp_warp_family(bounds("K1", {-1.0, -1.0}), bounds("K2", {-1.0, -1.0}),
                           a, b);
  if (name == "cosh-sinh") return cosh_sinh_tube_family(a, b);
  if (name == "cosh-cosh")
    return cosh_cosh_family(bounds("K1", {-1.0, -1.0}), bounds("K2", {-1.0, -1.0}),
                            a, b);
  throw ConfigError("unknown warp family \"" + name + "\"", "family");
}

// ---- command outcomes ------------------------------------------------------

struct Outcome {
  ordered_json results;
  bool verdict = true;
  std::vector<std::pair<std::string, Csv>> tables;
};

const std::set<std::string> kFamilyNames = {"rho_r", "tube", "lambda_r",
                                            "lambda_r_s"};

// shared metric/family resolution for curvature-sweep and family-check;
// piecewise families report through the PiecewiseWarpMetric overloads
Outcome sweep_metric(const Config& c, const std::string& name,
                     std::uint64_t seed, bool check_breakpoints) {
  RangeSpec spec = range_from(c, seed);
  Outcome out;
  PinchReport rep;
  std::vector<double> ks;

  if (name == "lambda_r" || name == "lambda_r_s") {
    ChartMetric factor = factor_metric(c);
    double r = c.num("r");
    double margin = c.num("margin", 0.1);
    TwistSpec tw = twist_from(c, factor.dim + 1);
    PiecewiseWarpMetric m =
        name == "lambda_r"
            ? build_lambda_r(r, factor, make_twist(tw), margin)
            : build_lambda_r_s(r, c.num("s"), make_twist_isotopy(tw), factor,
                               margin);
    rep = curvature_range(m, spec);
    ks = curvature_samples(m, spec);
    if (check_breakpoints) {
      BreakpointReport bp =
          breakpoint_smoothness(m, static_cast<int>(c.integer("order", 2)));
      out.results["breakpoints"] = to_json(bp);
      out.tables.emplace_back("breakpoints.csv", breakpoints_csv(bp));
      out.verdict = out.verdict && bp.pass;
    }
  } else {
    ChartMetric m = [&]() -> ChartMetric {
      if (name == "rho_r") return build_rho_r(c.num("r"), factor_metric(c));
      if (name == "tube")
        return tube_metric(factor_metric(c), c.num("length", 6.0));
      return named_metric(c, "metric", name);
    }();
    rep = curvature_range(m, spec);
    ks = curvature_samples(m, spec);
  }

  out.results["range"] = to_json(rep);
  out.verdict = out.verdict && rep.verdict;
  out.tables.emplace_back("samples.csv", samples_csv(ks, spec.planes_per_point));
  return out;
}

Outcome run_curvature_sweep(const Config& c, std::uint64_t seed) {
  c.allow({"metric", "factor", "r", "s", "length", "twist", "angle", "center",
           "radius", "margin", "points", "planes_per_point", "knot_exclusion",
           "target"});
  return sweep_metric(c, c.str("metric"), seed, false);
}

Outcome run_family_check(const Config& c, std::uint64_t seed) {
  c.allow({"family", "factor", "r", "s", "length", "twist", "angle", "center",
           "radius", "margin", "order", "points", "planes_per_point",
           "knot_exclusion", "target"});
  std::string name = c.str("family");
  if (!kFamilyNames.count(name))
    throw ConfigError("unknown family \"" + name + "\"", "family");
  return sweep_metric(c, name, seed, name == "lambda_r" || name == "lambda_r_s");
}

Outcome run_pinch_find(const Config& c, std::uint64_t seed) {
  std::string search = c.str("search", "alpha0");

  if (search == "alpha0") {
    c.allow({"search", "family", "K1", "K2", "a", "b", "eps", "alpha_lo",
             "alpha_hi", "alpha_step", "t_samples"});
    WarpFamily fam = family_from(c);
    double eps = c.num("eps");
    std::vector<double> grid = linear_grid(c.num("alpha_lo"), c.num("alpha_hi"),
                                           c.num("alpha_step", 0.01));
    int t_samples = static_cast<int>(c.integer("t_samples", 257));
    Alpha0Report rep = find_alpha0(fam, eps, grid, t_samples);

    Outcome out;
    out.results["family"] = fam.name;
    out.results["eps"] = rep.eps;
    out.results["found"] = rep.found;
    out.results["alpha0"] = rep.found ? ordered_json(rep.alpha0) : nullptr;
    out.results["grid_size"] = grid.size();
    out.results["t_samples"] = rep.t_samples;
    if (rep.witness_term >= 0) {
      ordered_json w;
      w["alpha"] = json_num(rep.witness_alpha);
      w["t"] = json_num(rep.witness_t);
      w["term"] = rep.witness_term;
      w["value"] = json_num(rep.witness_value);
      out.results["witness"] = w;
    }
    out.verdict = rep.found;

    std::vector<double> devs;
    devs.reserve(grid.size());
    for (double alpha : grid)
      devs.push_back(family_max_deviation(fam, alpha, t_samples));
    out.tables.emplace_back("alpha_deviation.csv",
                            alpha_deviation_csv(grid, devs));
    return out;
  }

  if (search == "min-r") {
    c.allow({"search", "factor", "eps", "r_grid", "s_values", "twist", "angle",
             "center", "radius", "margin", "points", "planes_per_point",
             "knot_exclusion"});
    ChartMetric factor = factor_metric(c);
    double eps = c.num("eps");
    double margin = c.num("margin", 0.1);
    std::vector<double> r_grid = c.num_list("r_grid");
    std::vector<double> s_values =
        c.has("s_values") ? c.num_list("s_values") : std::vector<double>{0.0};
    TwistIsotopy iso = make_twist_isotopy(twist_from(c, factor.dim + 1));
    RangeSpec spec = range_from(c, seed);

    auto builder = [&](double r, double s) {
      return build_lambda_r_s(r, s, iso, factor, margin);
    };
    RSweepReport rep = find_min_r(builder, eps, r_grid, s_values, spec);

    Outcome out;
    out.results["eps"] = rep.eps;
    out.results["found"] = rep.found;
    out.results["r_star"] = rep.found ? ordered_json(rep.r_star) : nullptr;
    ordered_json sv = ordered_json::array();
    for (double s : rep.s_values) sv.push_back(s);
    out.results["s_values"] = sv;
    ordered_json table = ordered_json::array();
    for (const auto& e : rep.table) {
      ordered_json row;
      row["r"] = e.r;
      row["worst_dev"] = json_num(e.worst_dev);
      row["pass"] = e.pass;
      table.push_back(row);
    }
    out.results["table"] = table;
    out.verdict = rep.found;
    out.tables.emplace_back("r_sweep.csv", r_sweep_csv(rep));
    return out;
  }

  throw ConfigError("unknown search \"" + search + "\" (use alpha0 or min-r)",
                    "search");
}

Outcome run_heatflow(const Config& c, std::uint64_t) {
  c.allow({"metric", "npts", "winding", "base", "perturb_axis", "amplitude",
           "tol", "max_steps", "dt", "record_every", "energy_target",
           "energy_tol"});
  ChartMetric target = named_metric(c, "metric", c.str("metric"));
  int npts = static_cast<int>(c.integer("npts", 256));
  std::vector<int> winding = c.int_list("winding");

  Eigen::VectorXd base = Eigen::VectorXd::Zero(target.dim);
  if (c.has("base")) {
    auto v = c.num_list("base");
    if (static_cast<int>(v.size()) != target.dim)
      throw ConfigError("key \"base\" must list " + std::to_string(target.dim) +
                            " coordinates",
                        "base");
    for (size_t i = 0; i < v.size(); ++i) base[static_cast<int>(i)] = v[i];
  }

  int axis = static_cast<int>(c.integer("perturb_axis", target.dim > 1 ? 1 : 0));
  double amplitude = c.num("amplitude", 0.0);
  ClosedCurve curve =
      perturbed_loop(target, npts, winding, base, axis, amplitude);

  FlowParams p;
  p.dt = c.num("dt", 0.0);
  p.max_steps = c.integer("max_steps", 200000);
  p.tol = c.num("tol", 1e-6);
  p.record_every = static_cast<int>(c.integer("record_every", 100));
  FlowResult res = flow_until(curve, p);

  Outcome out;
  out.results["metric"] = target.name;
  out.results["npts"] = npts;
  ordered_json w = ordered_json::array();
  for (int wi : winding) w.push_back(wi);
  out.results["winding"] = w;
  out.results["status"] = to_string(res.status);
  out.results["steps"] = res.steps;
  out.results["final_energy"] = json_num(res.final_energy);
  out.results["final_tension"] = json_num(res.final_tension);
  out.verdict = res.status == FlowStatus::converged;
  if (c.has("energy_target")) {
    double tgt = c.num("energy_target");
    double tol = c.num("energy_tol", 1e-3);
    bool hit = std::abs(res.final_energy - tgt) <= tol;
    out.results["energy_target"] = tgt;
    out.results["energy_tol"] = tol;
    out.results["energy_within_tol"] = hit;
    out.verdict = out.verdict && hit;
  }
  out.tables.emplace_back("trace.csv", trace_csv(res.trace));
  return out;
}

Outcome run_oracle_check(const Config& c, std::uint64_t seed) {
  c.allow({"points", "planes_per_point"});
  RangeSpec spec;
  spec.points = static_cast<int>(c.integer("points", 60));
  spec.planes_per_point = static_cast<int>(c.integer("planes_per_point", 12));
  spec.seed = seed;

  struct Check {
    std::string name;
    double value, tol;
  };
  std::vector<Check> checks;

  auto range_dev = [&](const ChartMetric& m, double expect) {
    PinchReport r = curvature_range(m, spec);
    return std::max(std::abs(r.K_min - expect), std::abs(r.K_max - expect));
  };
  checks.push_back({"flat-torus-range", range_dev(flat_torus(), 0.0), 1e-6});
  checks.push_back({"round-sphere-range", range_dev(round_sphere(), 1.0), 1e-5});
  checks.push_back(
      {"hyperbolic-plane-range", range_dev(hyperbolic_half_plane(), -1.0), 1e-5});

  // closed-form five-term curvature against the chart tensor on an assembled
  // doubly warped product with curved factors
  {
    ChartMetric s1 = hyperbolic_half_plane();
    ChartMetric s2 = round_sphere();
    WarpFunction p1 = warp_cosh(), p2 = warp_two_plus_sin();
    ChartMetric prod = assemble_doubly_warped(s1, s2, p1, p2, 0.5, 1.5);
    Rng rng(mix_seed(seed, 1234567));
    double worst = 0.0;
    for (double t : {0.6, 1.0, 1.4}) {
      for (int k = 0; k < 12; ++k) {
        DoublyWarpedFrame f = random_frame(rng, 2, 2);
        f.K1 = -1.0;
        f.K2 = 1.0;
        WarpContext ctx{&s1, &s2, p1, p2, sample_point(s1.domain, rng),
                        sample_point(s2.domain, rng), t};
        TangentPlane plane = frame_to_chart_plane(ctx, f);
        double closed = doubly_warped_K(p1, p2, t, f);
        double chart = sectional_at(prod, plane);
        worst = std::max(worst, std::abs(closed - chart));
      }
    }
    checks.push_back({"closed-form-vs-chart", worst, 1e-8});
  }

  checks.push_back({"tube-terms-at-minus-one",
                    family_max_deviation(cosh_sinh_tube_family(1.0, 2.0), 2.0),
                    1e-12});
  {
    ChartMetric cyl = hyperbolic_cylinder();
    ClosedCurve core =
        straight_loop(cyl, 128, {1, 0}, Eigen::VectorXd::Zero(2));
    checks.push_back({"cylinder-core-geodesic", max_tension_norm(core), 1e-10});
  }

  Outcome out;
  ordered_json arr = ordered_json::array();
  Csv csv{"oracle-checks", {"check", "value", "tol", "pass"}, {}};
  bool all = true;
  for (const auto& ch : checks) {
    bool pass = ch.value <= ch.tol;
    all = all && pass;
    ordered_json j;
    j["name"] = ch.name;
    j["value"] = json_num(ch.value);
    j["tol"] = ch.tol;
    j["pass"] = pass;
    arr.push_back(j);
    csv.rows.push_back(
        {ch.name, fmt_g17(ch.value), fmt_g17(ch.tol), pass ? "1" : "0"});
  }
  out.results["checks"] = arr;
  out.verdict = all;
  out.tables.emplace_back("oracle.csv", csv);
  return out;
}

Outcome dispatch(const std::string& command, const Config& c, std::uint64_t seed) {
  if (command == "curvature-sweep") return run_curvature_sweep(c, seed);
  if (command == "pinch-find") return run_pinch_find(c, seed);
  if (command == "family-check") return run_family_check(c, seed);
  if (command == "heatflow") return run_heatflow(c, seed);
  if (command == "oracle-check") return run_oracle_check(c, seed);
  throw Error("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped product curvature toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  long long seed_cli = -1;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"curvature-sweep", "sectional curvature range of a metric or family member"},
      {"pinch-find", "smallest pinching parameter (alpha0 or min-r search)"},
      {"family-check", "curvature range and breakpoint smoothness of a family"},
      {"heatflow", "harmonic map heat flow of a closed curve"},
      {"oracle-check", "cross-validate the engine against closed-form values"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (default .)");
    sub->add_option("--seed", seed_cli, "override the config seed")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::ifstream f(config_path);
    if (!f) throw Error("cannot open config file " + config_path);
    ordered_json cfg = ordered_json::parse(f);
    if (!cfg.is_object()) throw Error("config must be a JSON object");
    Config c{cfg, command};

    std::uint64_t seed = 0;
    if (c.has("seed")) {
      long s = c.integer("seed");
      if (s < 0) throw ConfigError("key \"seed\" must be non-negative", "seed");
      seed = static_cast<std::uint64_t>(s);
    }
    if (seed_cli >= 0) seed = static_cast<std::uint64_t>(seed_cli);

    Outcome out = dispatch(command, c, seed);

    fs::create_directories(out_dir);
    ordered_json report;
    report["command"] = command;
    report["config_echo"] = cfg;
    report["version"] = kVersion;
    report["seed"] = seed;
    report["timestamp"] = iso_utc_timestamp();
    report["results"] = out.results;
    report["verdict"] = out.verdict ? "pass" : "fail";
    {
      fs::path p = fs::path(out_dir) / "report.json";
      std::ofstream rf(p, std::ios::binary);
      if (!rf) throw Error("cannot open " + p.string() + " for writing");
      rf << report.dump(2) << "\n";
    }
    for (const auto& [fname, csv] : out.tables)
      write_csv((fs::path(out_dir) / fname).string(), csv);

    std::cout << command << ": " << (out.verdict ? "pass" : "fail") << "\n";
    return out.verdict ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
