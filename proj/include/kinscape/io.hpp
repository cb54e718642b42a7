#pragma once

// Text formats: angle tokens, chart descriptors, CSV grids, reports and run
// manifests.

#include <string>
#include <string_view>
#include <vector>

#include "kinscape/critana.hpp"
#include "kinscape/landscape.hpp"

namespace kinscape {

inline constexpr std::string_view kVersion = "0.1.0";

// Radians: decimals, or multiples of pi such as pi, -pi/2, 2pi/3, 3*pi/4.
double parse_angle(std::string_view token);

// "kind=full conv=yzy,zyz freeze=a1:0,g1:pi/2 surface=a1,g1 measured=1 target=2".
// Every field is optional; the reduced kinds default to their own measured/target.
Chart parse_chart(std::string_view descriptor);

std::string format_double(double v);  // 17 significant digits

struct GridAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int steps = 2;  // 1 gives the single value min
};

struct Grid {
    std::vector<std::string> header;  // coordinate names, then "value"
    std::vector<std::vector<double>> rows;
};

// Evaluates the chart on the lattice spanned by the axes (one per free
// coordinate, chart order). Rows are row-major: the first axis varies slowest.
Grid evaluate_grid(const Chart& chart, const std::vector<GridAxis>& axes, int workers = 0);

std::string format_csv(const Grid& grid);
Grid parse_csv(const std::string& text);

// Writes through a temporary file in the same directory and renames it into
// place; nothing is left behind on failure.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string format_critical_report(const std::string& chart_descriptor, const std::vector<CriticalPointRecord>& records,
                                   const SearchStats& stats);
std::string format_verify_report(const std::vector<RowResult>& rows);

// <output>.manifest.json with command, configuration, seed, version and wall time.
void write_manifest(const std::string& output_path, const std::string& command, const std::string& config_json,
                    std::uint64_t seed, double wall_seconds);

}  // namespace kinscape
