#include "warpcurv/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "warpcurv/errors.hpp"

namespace warpcurv {

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string iso_utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_string(const Csv& c) {
  std::ostringstream out;
  out << "# warpcurv csv v1 " << c.schema << "\n";
  for (size_t i = 0; i < c.columns.size(); ++i)
    out << (i ? "," : "") << c.columns[i];
  out << "\n";
  for (const auto& row : c.rows) {
    if (row.size() != c.columns.size())
      throw Error("csv row width does not match the column header");
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

void write_csv(const std::string& path, const Csv& c) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << to_string(c);
  if (!f) throw Error("write to " + path + " failed");
}

Csv samples_csv(const std::vector<double>& ks, int planes_per_point) {
  if (planes_per_point < 1) throw Error("planes_per_point must be >= 1");
  Csv c{"curvature-samples", {"point", "plane", "K"}, {}};
  c.rows.reserve(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    long pt = static_cast<long>(i) / planes_per_point;
    long pl = static_cast<long>(i) % planes_per_point;
    c.rows.push_back({std::to_string(pt), std::to_string(pl), fmt_g17(ks[i])});
  }
  return c;
}

Csv alpha_deviation_csv(const std::vector<double>& grid,
                        const std::vector<double>& deviations) {
  if (grid.size() != deviations.size())
    throw Error("alpha grid and deviation list differ in length");
  Csv c{"alpha-deviation", {"alpha", "max_deviation"}, {}};
  c.rows.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    c.rows.push_back({fmt_g17(grid[i]), fmt_g17(deviations[i])});
  return c;
}

Csv r_sweep_csv(const RSweepReport& r) {
  Csv c{"r-sweep", {"r", "s", "K_min", "K_max", "dev", "pass"}, {}};
  for (const auto& entry : r.table) {
    for (size_t si = 0; si < entry.per_s.size(); ++si) {
      const auto& per = entry.per_s[si];
      double s = si < r.s_values.size() ? r.s_values[si] : 0.0;
      double dev = std::max(std::abs(per.K_min + 1.0), std::abs(per.K_max + 1.0));
      c.rows.push_back({fmt_g17(entry.r), fmt_g17(s), fmt_g17(per.K_min),
                        fmt_g17(per.K_max), fmt_g17(dev),
                        per.verdict ? "1" : "0"});
    }
  }
  return c;
}

Csv breakpoints_csv(const BreakpointReport& b) {
  Csv c{"breakpoint-smoothness", {"knot", "order", "mismatch"}, {}};
  for (const auto& row : b.rows)
    for (int k = 0; k <= b.order; ++k)
      c.rows.push_back({fmt_g17(row.knot), std::to_string(k),
                        fmt_g17(row.mismatch[static_cast<size_t>(k)])});
  return c;
}

Csv trace_csv(const FlowTrace& t) {
  Csv c{"flow-trace", {"step", "energy", "tension_max"}, {}};
  c.rows.reserve(t.rows.size());
  for (const auto& row : t.rows)
    c.rows.push_back({std::to_string(row.step), fmt_g17(row.energy),
                      fmt_g17(row.tension_max)});
  return c;
}

}  // namespace warpcurv
