#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinscape/critana.hpp"
#include "kinscape/dynamics.hpp"
#include "kinscape/error.hpp"
#include "kinscape/io.hpp"
#include "kinscape/landscape.hpp"

namespace kinscape::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

GridAxis parse_axis(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw InvalidArgument("axis '" + spec + "': expected name:min:max:steps");
    GridAxis a;
    a.name = parts[0];
    a.min = parse_angle(parts[1]);
    a.max = parse_angle(parts[2]);
    try {
        std::size_t used = 0;
        a.steps = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
        throw InvalidArgument("axis '" + spec + "': bad step count");
    }
    return a;
}

// Output file plus its manifest; the data file is removed again if the
// manifest cannot be written.
void emit(const std::string& path, const std::string& body, const std::string& command, const json& config,
          std::uint64_t seed, Clock::time_point t0) {
    write_file_atomic(path, body);
    try {
        write_manifest(path, command, config.dump(), seed, seconds_since(t0));
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw;
    }
}

struct GridArgs {
    std::string chart;
    std::vector<std::string> axes;
    std::string out;
    int workers = 0;
};

int cmd_grid(const GridArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const Chart chart = parse_chart(a.chart);
    std::vector<GridAxis> axes;
    for (const auto& s : a.axes) axes.push_back(parse_axis(s));
    const Grid g = evaluate_grid(chart, axes, a.workers);

    json cfg;
    cfg["chart"] = chart.descriptor();
    for (const auto& ax : axes) cfg["axes"].push_back({{"name", ax.name}, {"min", ax.min}, {"max", ax.max}, {"steps", ax.steps}});
    emit(a.out, format_csv(g), "grid", cfg, 0, t0);

    std::size_t best = 0;
    for (std::size_t i = 1; i < g.rows.size(); ++i)
        if (g.rows[i].back() > g.rows[best].back()) best = i;
    out << "rows " << g.rows.size() << "\n";
    out << "max " << format_double(g.rows[best].back()) << " at";
    for (std::size_t k = 0; k + 1 < g.header.size(); ++k) out << " " << g.header[k] << "=" << format_double(g.rows[best][k]);
    out << "\n";
    return kOk;
}

struct CriticalArgs {
    std::string chart;
    SearchConfig cfg;
    std::string out;
};

int cmd_critical(const CriticalArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const Chart chart = parse_chart(a.chart);
    a.cfg.validate();
    SearchStats stats;
    const auto records = find_critical_points(chart, a.cfg, &stats);
    const std::string report = format_critical_report(chart.descriptor(), records, stats);
    if (a.out.empty()) {
        out << report;
        return kOk;
    }
    json cfg;
    cfg["chart"] = chart.descriptor();
    cfg["starts"] = a.cfg.starts;
    cfg["grad_tol"] = a.cfg.grad_tol;
    cfg["zero_eig_tol"] = a.cfg.zero_eig_tol;
    cfg["dedup_radius"] = a.cfg.dedup_radius;
    cfg["max_iterations"] = a.cfg.max_iterations;
    cfg["start_margin"] = a.cfg.start_margin;
    cfg["boundary_margin"] = a.cfg.boundary_margin;
    emit(a.out, report, "critical", cfg, a.cfg.seed, t0);
    out << "records " << records.size() << "\n";
    return kOk;
}

struct VerifyArgs {
    std::string tables = "all";
    VerifyOptions opts;
    std::string out;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    std::vector<std::string> selectors;
    std::stringstream ss(a.tables);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) selectors.push_back(item);
    const auto rows = verify_tables(selectors, a.opts);
    const std::string report = format_verify_report(rows);
    bool all = true;
    for (const auto& r : rows) all = all && r.pass;

    if (a.out.empty()) {
        out << report;
    } else {
        json cfg;
        cfg["tables"] = a.tables;
        cfg["value_tol"] = a.opts.value_tol;
        cfg["grad_tol"] = a.opts.grad_tol;
        cfg["hessian_tol"] = a.opts.hessian_tol;
        cfg["spectrum_tol"] = a.opts.spectrum_tol;
        cfg["zero_eig_tol"] = a.opts.zero_eig_tol;
        cfg["samples"] = a.opts.samples;
        emit(a.out, report, "verify", cfg, a.opts.seed, t0);
        for (const auto& r : rows) {
            out << (r.pass ? "pass " : "FAIL ") << r.row;
            for (const auto& f : r.failures) out << "  [" << f << "]";
            out << "\n";
        }
    }
    return all ? kOk : kPropertyFailure;
}

struct DynArgs {
    int trajectories = 1000;
    int steps = 100;
    int samples = 200;
    long budget = 100000;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    double mu = 1.0;
    int measured = 0;
    int target = 2;
    double min_best = -1.0;  // negative: chosen from the chart
    std::string out;
};

int finish(const std::string& report, bool ok, const DynArgs& a, const std::string& command, const json& cfg,
           Clock::time_point t0, std::ostream& out) {
    if (a.out.empty())
        out << report;
    else
        emit(a.out, report, command, cfg, a.seed, t0);
    out << (ok ? "ok" : "VIOLATED") << "\n";
    return ok ? kOk : kPropertyFailure;
}

int cmd_conserve(const DynArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const auto sys = SystemHamiltonians::standard(a.mu);
    const auto r = conservation_suite(a.trajectories, a.steps, a.seed, sys);
    std::string s = "REPORT v1\ncommand dynamics conserve\n";
    s += "trajectories " + std::to_string(r.trajectories) + "\n";
    s += "max_drift " + format_double(r.max_drift) + "\n";
    s += "max_phase_drift " + format_double(r.max_phase_drift) + "\n";
    s += "max_norm_drift " + format_double(r.max_norm_drift) + "\n";
    const bool ok = r.max_drift <= a.tol && r.max_phase_drift <= a.tol && r.max_norm_drift <= a.tol;
    json cfg{{"trajectories", a.trajectories}, {"steps", a.steps}, {"mu", a.mu}, {"tol", a.tol}};
    return finish(s, ok, a, "dynamics conserve", cfg, t0, out);
}

int cmd_bound(const DynArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const auto sys = SystemHamiltonians::standard(a.mu);
    BoundSearchOptions opts;
    if (a.measured != 0) opts.measured = a.measured;
    opts.target = a.target;
    Chart chart;
    chart.measured = a.measured;
    chart.target = a.target;
    chart.validate();
    const double sup = context_for(chart).global_max;
    double floor = a.min_best;
    if (floor < 0.0) floor = a.measured == 1 && a.target == 2 ? 0.68 : sup - 1e-3;

    const auto r = coherent_bound_search(a.budget, a.seed, sys, opts);
    std::string s = "REPORT v1\ncommand dynamics bound\n";
    s += "measured " + (a.measured ? std::to_string(a.measured) : std::string("none")) + "\n";
    s += "target " + std::to_string(a.target) + "\n";
    s += "evaluations " + std::to_string(r.evaluations) + "\n";
    s += "best " + format_double(r.best) + "\n";
    s += "kinematic_sup " + format_double(sup) + "\n";
    s += "required_min " + format_double(floor) + "\n";
    std::string cs;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) cs += (i ? "," : "") + format_double(r.coeffs[i]);
    s += "coeffs " + cs + "\n";
    const bool ok = r.best <= sup + 1e-9 && r.best >= floor;
    json cfg{{"budget", a.budget}, {"measured", a.measured}, {"target", a.target}, {"mu", a.mu},
             {"harmonics", opts.harmonics}, {"duration", opts.duration}, {"steps", opts.steps}};
    return finish(s, ok, a, "dynamics bound", cfg, t0, out);
}

int cmd_crosscheck(const DynArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    const auto sys = SystemHamiltonians::standard(a.mu);
    const auto r = crosscheck_suite(a.samples, a.seed, sys);
    std::string s = "REPORT v1\ncommand dynamics crosscheck\n";
    s += "samples " + std::to_string(r.samples) + "\n";
    s += "max_discrepancy " + format_double(r.max_discrepancy) + "\n";
    s += "max_unitarity_defect " + format_double(r.max_unitarity_defect) + "\n";
    s += "max_r_residual " + format_double(r.max_r_residual) + "\n";
    const bool ok = r.max_discrepancy <= a.tol;
    json cfg{{"samples", a.samples}, {"mu", a.mu}, {"tol", a.tol}};
    return finish(s, ok, a, "dynamics crosscheck", cfg, t0, out);
}

struct ZenoArgs {
    long n_max = 10;
    std::string delta_phi = "pi/2";
    std::string out;
};

int cmd_antizeno(const ZenoArgs& a, std::ostream& out) {
    const auto t0 = Clock::now();
    if (a.n_max < 1) throw InvalidArgument("n-max must be at least 1");
    const double dphi = parse_angle(a.delta_phi);
    if (!(dphi >= 0.0 && dphi <= kPi + 1e-15)) throw InvalidArgument("delta-phi must lie in [0, pi]");
    std::string csv = "N,pmax\n";
    for (long n = 1; n <= a.n_max; ++n) csv += std::to_string(n) + "," + format_double(anti_zeno_pmax(n, std::min(dphi, kPi))) + "\n";
    if (a.out.empty()) {
        out << csv;
        return kOk;
    }
    json cfg{{"n_max", a.n_max}, {"delta_phi", dphi}};
    emit(a.out, csv, "antizeno", cfg, 0, t0);
    out << "rows " << a.n_max << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kinematic control landscapes of a three-level system with intermediate measurement", "kinscape"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    GridArgs grid;
    auto* g = app.add_subcommand("grid", "Sample a chart on a lattice and write CSV");
    g->add_option("--chart", grid.chart, "Chart descriptor")->required();
    g->add_option("--axis", grid.axes, "name:min:max:steps, one per free coordinate in chart order")->required();
    g->add_option("-o,--out", grid.out, "CSV output path")->required();
    g->add_option("--workers", grid.workers, "Worker threads (0: environment or all cores)");

    CriticalArgs crit;
    auto* c = app.add_subcommand("critical", "Multi-start critical point search");
    c->add_option("--chart", crit.chart, "Chart descriptor")->required();
    c->add_option("--starts", crit.cfg.starts);
    c->add_option("--seed", crit.cfg.seed);
    c->add_option("--grad-tol", crit.cfg.grad_tol);
    c->add_option("--zero-eig-tol", crit.cfg.zero_eig_tol);
    c->add_option("--dedup-radius", crit.cfg.dedup_radius);
    c->add_option("--max-iter", crit.cfg.max_iterations);
    c->add_option("--start-margin", crit.cfg.start_margin);
    c->add_option("--boundary-margin", crit.cfg.boundary_margin);
    c->add_option("--workers", crit.cfg.workers);
    c->add_option("-o,--out", crit.out, "Report path (default: stdout)");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check the tabulated critical points");
    v->add_option("--tables", ver.tables, "Comma-separated tables or row ids, or 'all'");
    v->add_option("--value-tol", ver.opts.value_tol);
    v->add_option("--grad-tol", ver.opts.grad_tol);
    v->add_option("--hessian-tol", ver.opts.hessian_tol);
    v->add_option("--spectrum-tol", ver.opts.spectrum_tol);
    v->add_option("--zero-eig-tol", ver.opts.zero_eig_tol);
    v->add_option("--samples", ver.opts.samples, "Draws along starred families");
    v->add_option("--seed", ver.opts.seed);
    v->add_option("-o,--out", ver.out, "Report path (default: stdout)");

    DynArgs dyn;
    auto* d = app.add_subcommand("dynamics", "Property checks of the controlled dynamics");
    d->require_subcommand(1);
    auto common = [&dyn](CLI::App* s) {
        s->add_option("--seed", dyn.seed);
        s->add_option("--mu", dyn.mu, "Coupling strength");
        s->add_option("-o,--out", dyn.out, "Report path (default: stdout)");
    };
    auto* dc = d->add_subcommand("conserve", "Conservation of c1 c3 - c2^2/2");
    common(dc);
    dc->add_option("--trajectories", dyn.trajectories);
    dc->add_option("--steps", dyn.steps, "Control intervals per trajectory");
    dc->add_option("--tol", dyn.tol);
    auto* db = d->add_subcommand("bound", "Search controls for the best transition probability");
    common(db);
    db->add_option("--budget", dyn.budget, "Propagation-pair evaluations");
    db->add_option("--measured", dyn.measured, "Intermediate measured state (omit: coherent only)")->check(CLI::Range(1, 3));
    db->add_option("--target", dyn.target)->check(CLI::Range(1, 3));
    db->add_option("--min", dyn.min_best, "Required best value");
    auto* dx = d->add_subcommand("crosscheck", "Dynamic versus kinematic probabilities");
    common(dx);
    dx->add_option("--samples", dyn.samples);
    dx->add_option("--tol", dyn.tol);

    ZenoArgs zeno;
    auto* z = app.add_subcommand("antizeno", "Optimal N-measurement transfer probability");
    z->add_option("--n-max", zeno.n_max)->required();
    z->add_option("--delta-phi", zeno.delta_phi, "Rotation angle in radians (pi tokens allowed)");
    z->add_option("-o,--out", zeno.out, "CSV path (default: stdout)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (g->parsed()) return cmd_grid(grid, out);
        if (c->parsed()) return cmd_critical(crit, out);
        if (v->parsed()) return cmd_verify(ver, out);
        if (dc->parsed()) return cmd_conserve(dyn, out);
        if (db->parsed()) return cmd_bound(dyn, out);
        if (dx->parsed()) return cmd_crosscheck(dyn, out);
        if (z->parsed()) return cmd_antizeno(zeno, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace kinscape::cli
