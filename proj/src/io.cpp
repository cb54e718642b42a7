#include "kinscape/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "kinscape/error.hpp"
#include "kinscape/parallel.hpp"

namespace kinscape {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(std::string_view s, const std::string& context) {
    const std::string t = trim(s);
    if (t.empty()) throw InvalidArgument("empty number in " + context);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw InvalidArgument("bad number '" + t + "' in " + context);
    return v;
}

int parse_int(std::string_view s, const std::string& context) {
    const std::string t = trim(s);
    int v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw InvalidArgument("bad integer '" + t + "' in " + context);
    return v;
}

}  // namespace

double parse_angle(std::string_view token) {
    std::string t = trim(token);
    const std::string ctx = "angle '" + t + "'";
    const auto p = t.find("pi");
    if (p == std::string::npos) return parse_number(t, ctx);

    std::string coef = t.substr(0, p);
    std::string rest = t.substr(p + 2);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double c = 1.0;
    if (coef == "-")
        c = -1.0;
    else if (coef == "+" || coef.empty())
        c = 1.0;
    else
        c = parse_number(coef, ctx);
    double d = 1.0;
    if (!rest.empty()) {
        if (rest[0] != '/') throw InvalidArgument("bad " + ctx);
        d = parse_number(rest.substr(1), ctx);
        if (d == 0.0) throw InvalidArgument("division by zero in " + ctx);
    }
    return c * kPi / d;
}

Chart parse_chart(std::string_view descriptor) {
    Chart chart;
    bool has_measured = false, has_target = false;
    std::istringstream in{std::string(descriptor)};
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw InvalidArgument("chart token '" + tok + "' is not key=value");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "kind") {
            chart.kind = parse_chart_kind(val);
        } else if (key == "conv") {
            const auto parts = split(val, ',');
            if (parts.size() != 2) throw InvalidArgument("conv needs two conventions, e.g. conv=zyz,yzy");
            chart.conv1 = parse_convention(parts[0]);
            chart.conv2 = parse_convention(parts[1]);
        } else if (key == "freeze") {
            if (val.empty()) continue;
            for (const auto& item : split(val, ',')) {
                const auto c = item.find(':');
                if (c == std::string::npos) throw InvalidArgument("freeze entry '" + item + "' is not name:value");
                chart.frozen[item.substr(0, c)] = parse_angle(item.substr(c + 1));
            }
        } else if (key == "surface") {
            if (val.empty()) continue;
            for (const auto& item : split(val, ',')) chart.surface.insert(item);
        } else if (key == "measured") {
            chart.measured = val == "none" ? 0 : parse_int(val, "measured");
            has_measured = true;
        } else if (key == "target") {
            chart.target = parse_int(val, "target");
            has_target = true;
        } else {
            throw InvalidArgument("unknown chart key '" + key + "'");
        }
    }
    if (chart.kind == ChartKind::M || chart.kind == ChartKind::MEnvelope) {
        if (!has_measured) chart.measured = 2;
        if (!has_target) chart.target = 2;
    }
    chart.validate();
    return chart;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Grid evaluate_grid(const Chart& chart, const std::vector<GridAxis>& axes, int workers) {
    chart.validate();
    const auto free = chart.free();
    if (axes.size() != free.size())
        throw InvalidArgument("grid needs one axis per free coordinate (" + std::to_string(free.size()) + ")");
    const auto names = chart.coordinates();
    const auto kinds = chart.kinds();
    std::size_t total = 1;
    for (std::size_t k = 0; k < axes.size(); ++k) {
        const GridAxis& a = axes[k];
        if (a.name != free[k]) throw InvalidArgument("axis " + std::to_string(k) + " must be '" + free[k] + "'");
        const auto pos = static_cast<std::size_t>(std::find(names.begin(), names.end(), a.name) - names.begin());
        const double lo = kinds[pos] == CoordKind::Polar ? 0.0 : -kPi;
        if (!std::isfinite(a.min) || !std::isfinite(a.max) || a.min < lo - 1e-12 || a.max > kPi + 1e-12)
            throw InvalidArgument("axis '" + a.name + "' leaves [" + format_double(lo) + ", pi]");
        if (a.steps < 1) throw InvalidArgument("axis '" + a.name + "': steps must be at least 1");
        if (a.steps >= 2 && !(a.min < a.max)) throw InvalidArgument("axis '" + a.name + "': min must be below max");
        total *= static_cast<std::size_t>(a.steps);
    }

    Grid g;
    g.header = free;
    g.header.push_back("value");
    g.rows.assign(total, {});
    parallel_for(total, worker_count(workers), [&](std::size_t idx) {
        std::vector<double> p(axes.size());
        std::size_t rem = idx;
        for (std::size_t k = axes.size(); k-- > 0;) {
            const GridAxis& a = axes[k];
            const std::size_t i = rem % static_cast<std::size_t>(a.steps);
            rem /= static_cast<std::size_t>(a.steps);
            p[k] = a.steps == 1 ? a.min : a.min + (a.max - a.min) * static_cast<double>(i) / (a.steps - 1);
        }
        std::vector<double> row = p;
        row.push_back(chart_eval(chart, p));
        g.rows[idx] = std::move(row);
    });
    return g;
}

std::string format_csv(const Grid& grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.header.size(); ++i) out += (i ? "," : "") + grid.header[i];
    out += "\n";
    for (const auto& row : grid.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

Grid parse_csv(const std::string& text) {
    Grid g;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty CSV");
    g.header = split(line, ',');
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(line, ',')) row.push_back(parse_number(cell, "CSV cell"));
        if (row.size() != g.header.size()) throw InvalidArgument("CSV row width does not match the header");
        g.rows.push_back(std::move(row));
    }
    return g;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.flush();
            if (!out) throw Error("write to '" + tmp.string() + "' failed");
        }
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

std::string named_coords(const std::vector<std::string>& names, const Eigen::VectorXd& x) {
    std::string s;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += (static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)] : "x" + std::to_string(i)) +
             "=" + format_double(x(i));
    }
    return s;
}

}  // namespace

std::string format_critical_report(const std::string& chart_descriptor, const std::vector<CriticalPointRecord>& records,
                                   const SearchStats& stats) {
    std::string s = "REPORT v1\n";
    s += "command critical\n";
    s += "chart " + chart_descriptor + "\n";
    s += "starts_converged " + std::to_string(stats.converged) + "\n";
    s += "starts_no_convergence " + std::to_string(stats.no_convergence) + "\n";
    s += "starts_boundary " + std::to_string(stats.rejected_boundary) + "\n";
    s += "records " + std::to_string(records.size()) + "\n";
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        s += "\nrecord " + std::to_string(k + 1) + "\n";
        s += "chart " + r.chart + "\n";
        s += "coords " + named_coords(r.names, r.coords) + "\n";
        s += "value " + format_double(r.value) + "\n";
        s += "grad_norm " + format_double(r.grad_norm) + "\n";
        s += "eigs " + join_doubles(r.hessian_eigs) + "\n";
        s += "class " + std::string(to_string(r.classification)) + "\n";
        if (!r.family.empty()) s += "family " + r.family + "\n";
        if (r.probe_status) s += "probe " + std::string(to_string(*r.probe_status)) + "\n";
        if (r.probe_growth_order) s += "probe_order " + std::to_string(*r.probe_growth_order) + "\n";
        s += "multiplicity " + std::to_string(r.multiplicity) + "\n";
    }
    return s;
}

std::string format_verify_report(const std::vector<RowResult>& rows) {
    std::size_t passed = 0;
    for (const auto& r : rows) passed += r.pass ? 1 : 0;
    std::string s = "REPORT v1\n";
    s += "command verify\n";
    s += "rows " + std::to_string(rows.size()) + "\n";
    s += "passed " + std::to_string(passed) + "\n";
    s += "failed " + std::to_string(rows.size() - passed) + "\n";
    for (const auto& r : rows) {
        s += "\nrow " + r.row + "\n";
        s += "table " + r.table + "\n";
        s += "chart " + r.chart + "\n";
        s += "coords " + join_doubles(std::vector<double>(r.coords.data(), r.coords.data() + r.coords.size())) + "\n";
        s += "expected_value " + format_double(r.expected_value) + "\n";
        s += "value " + format_double(r.value) + "\n";
        s += "grad_norm " + format_double(r.grad_norm) + "\n";
        s += "eigs " + join_doubles(r.eigs) + "\n";
        s += "expected_class " + r.expected_class + "\n";
        s += "class " + r.found_class + "\n";
        s += std::string("status ") + (r.pass ? "pass" : "fail") + "\n";
        for (const auto& f : r.failures) s += "failure " + f + "\n";
    }
    return s;
}

void write_manifest(const std::string& output_path, const std::string& command, const std::string& config_json,
                    std::uint64_t seed, double wall_seconds) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = nlohmann::json::parse(config_json);
    j["seed"] = seed;
    j["version"] = std::string(kVersion);
    j["output"] = output_path;
    j["wall_time_s"] = wall_seconds;
    write_file_atomic(output_path + ".manifest.json", j.dump(2) + "\n");
}

}  // namespace kinscape
