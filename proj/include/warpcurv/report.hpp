// Formatting primitives for the command-line reports: stable float
// formatting, versioned CSV tables, and converters from the analysis
// result structs to rows.  JSON assembly lives in the CLI driver.
#pragma once

#include <string>
#include <vector>

#include "warpcurv/families.hpp"
#include "warpcurv/heat_flow.hpp"
#include "warpcurv/pinching.hpp"

namespace warpcurv {

inline constexpr const char* kVersion = "0.1.0";

// %.17g: enough digits that a double round-trips exactly, so reruns
// with identical inputs produce byte-identical tables.
std::string fmt_g17(double v);

// 2024-06-01T12:34:56Z (UTC, second resolution)
std::string iso_utc_timestamp();

struct Csv {
  std::string schema;  // short name recorded in the header comment
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// First line is "# warpcurv csv v1 <schema>", second the column names.
std::string to_string(const Csv& c);
void write_csv(const std::string& path, const Csv& c);

// point index, plane index, sectional curvature
Csv samples_csv(const std::vector<double>& ks, int planes_per_point);

// alpha, max deviation of the five-term bracket from -1
Csv alpha_deviation_csv(const std::vector<double>& grid,
                        const std::vector<double>& deviations);

Csv r_sweep_csv(const RSweepReport& r);      // r, s, worst_dev, pass
Csv breakpoints_csv(const BreakpointReport& b);  // knot, jump per order
Csv trace_csv(const FlowTrace& t);           // step, energy, tension_max

}  // namespace warpcurv
