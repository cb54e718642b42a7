// Known critical-point tables of the P(1 -> 2) landscape with measurement of |1>,
// encoded as chart points with expected values, types, Hessians and spectra.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kinscape/critana.hpp"
#include "kinscape/error.hpp"

namespace kinscape {

namespace {

const double r5 = std::sqrt(5.0);
const double r6 = std::sqrt(6.0);

const double b1_I = std::acos((1.0 + r6) / 5.0);
const double b2_I = 0.5 * std::acos(1.0 / (1.0 - r6));
const double b1_II = std::acos((1.0 - r6) / 5.0);
const double b2_II = 0.5 * std::acos(1.0 / (1.0 + r6));
const double b1_III = std::acos((-1.0 + r5) / 2.0);
const double b2_III = 0.5 * std::atan(2.0 * std::sqrt(2.0 + r5));

const double v_quarter = 0.25;
const double v_low = 3.0 / 50.0 * (9.0 - r6);
const double v_max = 3.0 / 50.0 * (9.0 + r6);

// Coordinate supplier: fixed values or draws for starred coordinates.
using PointFn = std::function<std::vector<double>(std::mt19937_64&)>;
using MatrixFn = std::function<Eigen::MatrixXd(const std::vector<double>&)>;
using SpectrumFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct Row {
    std::string table;
    std::string id;
    Chart chart;
    PointFn point;  // all chart coordinates, chart order
    bool starred = false;
    double value = 0.0;
    Classification type = Classification::Degenerate;
    MatrixFn hessian;    // printed Hessian over the stationary coordinates
    SpectrumFn spectrum; // printed eigenvalues
    bool closed_form_hessian = false;  // compare against l1_hessian as well
};

double draw_angle(std::mt19937_64& rng) { return kPi * (2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng) - 1.0); }
double draw_polar(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.05, kPi - 0.05)(rng); }

Chart make_chart(ChartKind kind, Convention c1, Convention c2, std::map<std::string, double> frozen,
                 std::set<std::string> surface) {
    Chart ch;
    ch.kind = kind;
    ch.conv1 = c1;
    ch.conv2 = c2;
    ch.frozen = std::move(frozen);
    ch.surface = std::move(surface);
    ch.measured = 1;
    ch.target = 2;
    return ch;
}

// All six coordinates stationary, all frozen: a point check on the full chart.
Chart full_point_chart(Convention c1, Convention c2) {
    return make_chart(ChartKind::Full, c1, c2, {{"a1", 0}, {"b1", 0}, {"g1", 0}, {"a2", 0}, {"b2", 0}, {"g2", 0}},
                      {"a1", "b1", "g1", "a2", "b2", "g2"});
}

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index k = 0;
        for (double v : r) m(i, k++) = v;
        ++i;
    }
    return m;
}

std::vector<Row> build_rows() {
    std::vector<Row> rows;
    const Chart l1c = make_chart(ChartKind::L1, Convention::ZYZ, Convention::ZYZ, {}, {});
    auto fixed = [](std::vector<double> v) { return PointFn([v](std::mt19937_64&) { return v; }); };

    auto l1_row = [&](std::string id, std::vector<double> p, double value, Classification type, Eigen::MatrixXd h) {
        Row r;
        r.table = "l1";
        r.id = "l1." + id;
        r.chart = l1c;
        r.point = fixed(std::move(p));
        r.value = value;
        r.type = type;
        r.hessian = [h](const std::vector<double>&) { return h; };
        r.closed_form_hessian = true;
        rows.push_back(std::move(r));
    };

    const Eigen::MatrixXd h_I_pi = mat({{(13 * r6 - 42) / 250, 0, 0},
                                        {0, (23 * r6 - 32) / 100, (-8 - 13 * r6) / 50},
                                        {0, (-8 - 13 * r6) / 50, (r6 - 4) / 5}});
    const Eigen::MatrixXd h_II_pi = mat({{(-42 - 13 * r6) / 250, 0, 0},
                                         {0, (-32 - 23 * r6) / 100, (13 * r6 - 8) / 50},
                                         {0, (13 * r6 - 8) / 50, (-4 - r6) / 5}});
    const Eigen::MatrixXd h_III_pi = mat({{(7 - 3 * r5) / 4, 0, 0},
                                          {0, (r5 - 3) / 2, (1 + r5) / 4},
                                          {0, (1 + r5) / 4, (r5 - 1) / 4}});
    const Eigen::MatrixXd h_I_0 = mat({{(13 * r6 - 42) / 250, 0, 0},
                                       {0, (23 * r6 - 32) / 100, (8 + 13 * r6) / 50},
                                       {0, (8 + 13 * r6) / 50, (r6 - 4) / 5}});
    const Eigen::MatrixXd h_II_0 = mat({{(-42 - 13 * r6) / 250, 0, 0},
                                        {0, (-32 - 23 * r6) / 100, (8 - 13 * r6) / 50},
                                        {0, (8 - 13 * r6) / 50, (-4 - r6) / 5}});
    const Eigen::MatrixXd h_III_0 = mat({{(7 - 3 * r5) / 4, 0, 0},
                                         {0, (r5 - 3) / 2, (-1 - r5) / 4},
                                         {0, (-1 - r5) / 4, (r5 - 1) / 4}});

    l1_row("saddle.+pi/2", {kPi / 2, kPi / 2, kPi / 2}, v_quarter, Classification::Saddle,
           mat({{0, 0, -0.5}, {0, 0.5, 0}, {-0.5, 0, 0.5}}));
    l1_row("saddle.-pi/2", {-kPi / 2, kPi / 2, kPi / 2}, v_quarter, Classification::Saddle,
           mat({{0, 0, 0.5}, {0, 0.5, 0}, {0.5, 0, 0.5}}));
    l1_row("saddle.III.pi", {kPi, b1_III, kPi - b2_III}, v_quarter, Classification::Saddle, h_III_pi);
    l1_row("saddle.III.0", {0, b1_III, b2_III}, v_quarter, Classification::Saddle, h_III_0);
    l1_row("saddle.I.pi", {kPi, b1_I, b2_I}, v_low, Classification::Saddle, h_I_pi);
    l1_row("saddle.I.0", {0, b1_I, kPi - b2_I}, v_low, Classification::Saddle, h_I_0);
    l1_row("max.pi", {kPi, b1_II, b2_II}, v_max, Classification::GlobalMax, h_II_pi);
    l1_row("max.0", {0, b1_II, kPi - b2_II}, v_max, Classification::GlobalMax, h_II_0);

    // (YZY, ZYZ) on the surface a1 = g1 = 0; a2 drops out of P(1 -> 2)
    {
        Row r;
        r.table = "yzy-zyz";
        r.id = "yzy-zyz.trap";
        r.chart = make_chart(ChartKind::Full, Convention::YZY, Convention::ZYZ, {{"a1", 0}, {"g1", 0}, {"a2", 0}},
                             {"a1", "g1"});
        r.point = [](std::mt19937_64& rng) {
            const double b1 = draw_polar(rng);
            const double g2 = draw_angle(rng);
            return std::vector<double>{0, b1, 0, 0, kPi / 2, g2};
        };
        r.starred = true;
        r.value = 0.5;
        r.type = Classification::SecondOrderTrap;
        r.hessian = [](const std::vector<double>& p) {
            const double c = std::cos(p[1]);
            return mat({{-0.5, 0, -0.5 * c, 0, 0},
                        {0, 0, 0, 0, 0},
                        {-0.5 * c, 0, -0.5, 0, 0},
                        {0, 0, 0, -1, 0},
                        {0, 0, 0, 0, 0}});
        };
        r.spectrum = [](const std::vector<double>& p) {
            const double c = std::cos(p[1]);
            return std::vector<double>{0, 0, -1, -0.5 * (1 + c), -0.5 * (1 - c)};
        };
        rows.push_back(std::move(r));
    }

    // (YZY, YZY) on a1 = g1 = a2 = g2 = 0
    {
        Row r;
        r.table = "yzy-yzy";
        r.id = "yzy-yzy.min";
        r.chart = make_chart(ChartKind::Full, Convention::YZY, Convention::YZY,
                             {{"a1", 0}, {"g1", 0}, {"a2", 0}, {"g2", 0}}, {"a1", "g1", "a2", "g2"});
        r.point = [](std::mt19937_64& rng) {
            const double b1 = draw_polar(rng);
            const double b2 = draw_polar(rng);
            return std::vector<double>{0, b1, 0, 0, b2, 0};
        };
        r.starred = true;
        r.value = 0.0;
        r.type = Classification::GlobalMin;
        r.hessian = [](const std::vector<double>& p) {
            const double c1 = std::cos(p[1]);
            const double c2 = std::cos(p[4]);
            return mat({{1, 0, c1, 0, 0, 0},
                        {0, 0, 0, 0, 0, 0},
                        {c1, 0, 1, 0, 0, 0},
                        {0, 0, 0, 1, 0, c2},
                        {0, 0, 0, 0, 0, 0},
                        {0, 0, 0, c2, 0, 1}});
        };
        r.spectrum = [](const std::vector<double>& p) {
            const double c1 = std::cos(p[1]);
            const double c2 = std::cos(p[4]);
            return std::vector<double>{0, 0, 1 + c1, 1 - c1, 1 + c2, 1 - c2};
        };
        rows.push_back(std::move(r));
    }

    // (I, ZYZ): U(1) = I written as YZY(0, 0, 0), its angles kept stationary
    {
        Row r;
        r.table = "id-zyz";
        r.id = "id-zyz.trap";
        r.chart = make_chart(ChartKind::Full, Convention::YZY, Convention::ZYZ,
                             {{"a1", 0}, {"b1", 0}, {"g1", 0}, {"a2", 0}, {"g2", 0}}, {"a1", "b1", "g1", "g2"});
        r.point = fixed({0, 0, 0, 0, kPi / 2, 0});
        r.value = 0.5;
        r.type = Classification::SecondOrderTrap;
        rows.push_back(std::move(r));
    }

    // (I, YZY) on a = g = 0
    {
        Row r;
        r.table = "id-yzy";
        r.id = "id-yzy.trap";
        r.chart = make_chart(ChartKind::Full, Convention::ZYZ, Convention::YZY,
                             {{"a1", 0}, {"b1", 0}, {"g1", 0}, {"a2", 0}, {"g2", 0}}, {"a2", "g2"});
        r.point = [](std::mt19937_64& rng) {
            const double b = draw_polar(rng);
            return std::vector<double>{0, 0, 0, 0, b, 0};
        };
        r.starred = true;
        r.value = 0.5;
        r.type = Classification::SecondOrderTrap;
        r.hessian = [](const std::vector<double>& p) {
            const double c = std::cos(p[4]);
            return mat({{1, 0, c}, {0, 0, 0}, {c, 0, 1}});
        };
        rows.push_back(std::move(r));
    }

    // Summary over all strata, on the full six-coordinate charts.
    auto theorem = [&](std::string id, Convention c1, Convention c2, PointFn p, bool starred, double value,
                       Classification type) {
        Row r;
        r.table = "theorem";
        r.id = "theorem." + id;
        r.chart = full_point_chart(c1, c2);
        r.point = std::move(p);
        r.starred = starred;
        r.value = value;
        r.type = type;
        rows.push_back(std::move(r));
    };
    const auto Z = Convention::ZYZ;
    const auto Y = Convention::YZY;
    auto zz = [](double b1, double b2, double omega_shift) {
        return PointFn([=](std::mt19937_64& rng) {
            const double a1 = draw_angle(rng);
            const double g1 = draw_angle(rng);
            const double a2 = draw_angle(rng);
            return std::vector<double>{a1, b1, g1, a2, b2, wrap_angle(omega_shift - a1)};
        });
    };
    theorem("yzy-yzy.min", Y, Y, [](std::mt19937_64& rng) {
        const double b1 = draw_polar(rng);
        const double b2 = draw_polar(rng);
        return std::vector<double>{0, b1, 0, 0, b2, 0};
    }, true, 0.0, Classification::GlobalMin);
    theorem("id-id.min", Y, Y, fixed({0, 0, 0, 0, 0, 0}), false, 0.0, Classification::GlobalMin);
    theorem("zyz-zyz.saddle.+pi/2", Z, Z, zz(kPi / 2, kPi / 2, kPi / 2), true, v_quarter, Classification::Saddle);
    theorem("zyz-zyz.saddle.-pi/2", Z, Z, zz(kPi / 2, kPi / 2, -kPi / 2), true, v_quarter, Classification::Saddle);
    theorem("zyz-zyz.saddle.III.pi", Z, Z, zz(b1_III, kPi - b2_III, kPi), true, v_quarter, Classification::Saddle);
    theorem("zyz-zyz.saddle.III.0", Z, Z, zz(b1_III, b2_III, 0.0), true, v_quarter, Classification::Saddle);
    theorem("zyz-zyz.saddle.I.pi", Z, Z, zz(b1_I, b2_I, kPi), true, v_low, Classification::Saddle);
    theorem("zyz-zyz.saddle.I.0", Z, Z, zz(b1_I, kPi - b2_I, 0.0), true, v_low, Classification::Saddle);
    theorem("yzy-zyz.trap", Y, Z, [](std::mt19937_64& rng) {
        const double b1 = draw_polar(rng);
        const double a2 = draw_angle(rng);
        const double g2 = draw_angle(rng);
        return std::vector<double>{0, b1, 0, a2, kPi / 2, g2};
    }, true, 0.5, Classification::SecondOrderTrap);
    theorem("id-zyz.trap", Y, Z, fixed({0, 0, 0, 0, kPi / 2, 0}), false, 0.5, Classification::SecondOrderTrap);
    theorem("id-yzy.trap", Y, Y, [](std::mt19937_64& rng) {
        const double b2 = draw_polar(rng);
        return std::vector<double>{0, 0, 0, 0, b2, 0};
    }, true, 0.5, Classification::SecondOrderTrap);
    theorem("zyz-id.trap", Z, Y, fixed({0, kPi / 2, 0, 0, 0, 0}), false, 0.5, Classification::SecondOrderTrap);
    theorem("yzy-id.trap", Y, Y, [](std::mt19937_64& rng) {
        const double b1 = draw_polar(rng);
        return std::vector<double>{0, b1, 0, 0, 0, 0};
    }, true, 0.5, Classification::SecondOrderTrap);
    theorem("zyz-zyz.max.pi", Z, Z, zz(b1_II, b2_II, kPi), true, v_max, Classification::GlobalMax);
    theorem("zyz-zyz.max.0", Z, Z, zz(b1_II, kPi - b2_II, 0.0), true, v_max, Classification::GlobalMax);
    return rows;
}

bool selected(const Row& r, const std::vector<std::string>& selectors) {
    for (const auto& s : selectors) {
        if (s == "all" || s == r.table || s == r.id) return true;
        if (r.id.size() > s.size() && r.id.compare(0, s.size(), s) == 0 && r.id[s.size()] == '.') return true;
    }
    return false;
}

std::uint32_t fnv1a(const std::string& s) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : s) h = (h ^ c) * 16777619u;
    return h;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

RowResult check_point(const Row& row, const std::vector<double>& p, const VerifyOptions& opts) {
    RowResult res;
    res.table = row.table;
    res.row = row.id;
    res.expected_value = row.value;
    res.expected_class = std::string(to_string(row.type));

    // Frozen coordinates take the row's values; the rest are free.
    Chart chart = row.chart;
    const auto names = chart.coordinates();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (chart.frozen.count(names[i])) chart.frozen[names[i]] = p[i];
    res.chart = chart.descriptor();

    const Landscape land(chart);
    Eigen::VectorXd x(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) x(static_cast<Eigen::Index>(i)) = p[i];
    res.coords = x;

    SearchConfig cfg;
    cfg.grad_tol = opts.grad_tol;
    cfg.zero_eig_tol = opts.zero_eig_tol;
    const CriticalPointRecord rec = analyze_point(land, x, cfg, context_for(chart));
    res.value = rec.value;
    res.grad_norm = rec.grad_norm;
    res.eigs = rec.hessian_eigs;
    res.found_class = std::string(to_string(rec.classification));

    if (!(std::abs(rec.value - row.value) <= opts.value_tol))
        res.failures.push_back("value " + num(rec.value) + " != " + num(row.value));
    if (!(rec.grad_norm <= opts.grad_tol)) res.failures.push_back("grad_norm " + num(rec.grad_norm));
    if (rec.classification != row.type) res.failures.push_back("class " + res.found_class + " != " + res.expected_class);

    if (row.hessian) {
        const Eigen::MatrixXd printed = row.hessian(p);
        const Eigen::MatrixXd ad = land.derivatives(x).hess;
        if (printed.rows() != ad.rows()) {
            res.failures.push_back("printed Hessian has the wrong size");
        } else {
            const double dev = (printed - ad).cwiseAbs().maxCoeff();
            if (!(dev <= opts.hessian_tol)) res.failures.push_back("Hessian deviation " + num(dev));
            if (row.closed_form_hessian) {
                const double dev2 = (printed - l1_hessian({p[0], p[1], p[2]})).cwiseAbs().maxCoeff();
                if (!(dev2 <= opts.hessian_tol)) res.failures.push_back("closed-form Hessian deviation " + num(dev2));
            }
        }
    }
    if (row.spectrum) {
        std::vector<double> want = row.spectrum(p);
        std::sort(want.begin(), want.end());
        if (want.size() != rec.hessian_eigs.size()) {
            res.failures.push_back("printed spectrum has the wrong size");
        } else {
            double dev = 0.0;
            for (std::size_t i = 0; i < want.size(); ++i) dev = std::max(dev, std::abs(want[i] - rec.hessian_eigs[i]));
            if (!(dev <= opts.spectrum_tol)) res.failures.push_back("spectrum deviation " + num(dev));
        }
    }
    res.pass = res.failures.empty();
    return res;
}

}  // namespace

std::vector<std::string> table_ids() { return {"l1", "yzy-zyz", "yzy-yzy", "id-zyz", "id-yzy", "theorem"}; }

std::vector<RowResult> verify_tables(const std::vector<std::string>& selectors, const VerifyOptions& opts) {
    if (opts.samples <= 0) throw InvalidArgument("samples must be positive");
    const std::vector<Row> rows = build_rows();
    for (const auto& s : selectors) {
        const bool known = std::any_of(rows.begin(), rows.end(), [&](const Row& r) { return selected(r, {s}); });
        if (!known) throw InvalidArgument("unknown table or row '" + s + "'");
    }
    std::vector<RowResult> out;
    for (const Row& row : rows) {
        if (!selected(row, selectors)) continue;
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          fnv1a(row.id)};
        std::mt19937_64 rng(seq);
        const int n = row.starred ? opts.samples : 1;
        for (int s = 0; s < n; ++s) {
            RowResult r = check_point(row, row.point(rng), opts);
            if (row.starred) r.row += "#" + std::to_string(s);
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace kinscape
