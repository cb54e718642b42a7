#include "kinscape/landscape.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "kinscape/error.hpp"

namespace kinscape {

namespace {

constexpr double kRangeSlack = 1e-12;

bool in_range(CoordKind kind, double v) {
    if (!std::isfinite(v)) return false;
    if (kind == CoordKind::Polar) return v >= -kRangeSlack && v <= kPi + kRangeSlack;
    return v >= -kPi - kRangeSlack && v <= kPi + kRangeSlack;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int index_of(const std::vector<std::string>& names, const std::string& n) {
    const auto it = std::find(names.begin(), names.end(), n);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

}  // namespace

std::string_view to_string(ChartKind k) {
    switch (k) {
        case ChartKind::Full: return "full";
        case ChartKind::L1: return "l1";
        case ChartKind::M: return "m";
        case ChartKind::MEnvelope: return "menv";
    }
    return "?";
}

ChartKind parse_chart_kind(std::string_view s) {
    if (s == "full" || s == "chart") return ChartKind::Full;
    if (s == "l1") return ChartKind::L1;
    if (s == "m") return ChartKind::M;
    if (s == "menv") return ChartKind::MEnvelope;
    throw InvalidArgument("unknown chart kind '" + std::string(s) + "'");
}

std::vector<std::string> Chart::coordinates() const {
    switch (kind) {
        case ChartKind::Full: return {"a1", "b1", "g1", "a2", "b2", "g2"};
        case ChartKind::L1:
        case ChartKind::M: return {"o", "b1", "b2"};
        case ChartKind::MEnvelope: return {"b1", "b2"};
    }
    return {};
}

std::vector<CoordKind> Chart::kinds() const {
    std::vector<CoordKind> k;
    for (const auto& n : coordinates()) k.push_back(n[0] == 'b' ? CoordKind::Polar : CoordKind::Periodic);
    return k;
}

std::vector<std::string> Chart::free() const {
    std::vector<std::string> out;
    for (const auto& n : coordinates())
        if (!frozen.count(n)) out.push_back(n);
    return out;
}

std::vector<std::string> Chart::stationary() const {
    std::vector<std::string> out;
    for (const auto& n : coordinates())
        if (!frozen.count(n) || surface.count(n)) out.push_back(n);
    return out;
}

void Chart::validate() const {
    const auto names = coordinates();
    const auto ks = kinds();
    for (const auto& [n, v] : frozen) {
        const int i = index_of(names, n);
        if (i < 0) throw InvalidArgument("chart " + std::string(to_string(kind)) + " has no coordinate '" + n + "'");
        if (!in_range(ks[i], v)) throw InvalidArgument("frozen value of '" + n + "' is out of range");
    }
    for (const auto& n : surface)
        if (!frozen.count(n)) throw InvalidArgument("surface coordinate '" + n + "' must also be frozen");
    if (target < 1 || target > 3) throw InvalidArgument("target must be 1, 2 or 3");
    if (measured < 0 || measured > 3) throw InvalidArgument("measured state must be none or 1, 2, 3");
    if (kind == ChartKind::L1 && !(measured == 1 && target == 2))
        throw InvalidArgument("l1 chart is defined for measured 1, target 2");
    if ((kind == ChartKind::M || kind == ChartKind::MEnvelope) && !(measured == 2 && target == 2))
        throw InvalidArgument("m charts are defined for measured 2, target 2");
}

std::string Chart::descriptor() const {
    std::string s = "kind=" + std::string(to_string(kind));
    if (kind == ChartKind::Full) s += " conv=" + std::string(to_string(conv1)) + "," + std::string(to_string(conv2));
    if (!frozen.empty()) {
        s += " freeze=";
        bool first = true;
        for (const auto& n : coordinates()) {
            const auto it = frozen.find(n);
            if (it == frozen.end()) continue;
            if (!first) s += ",";
            s += n + ":" + fmt17(it->second);
            first = false;
        }
    }
    if (!surface.empty()) {
        s += " surface=";
        bool first = true;
        for (const auto& n : coordinates()) {
            if (!surface.count(n)) continue;
            if (!first) s += ",";
            s += n;
            first = false;
        }
    }
    s += " measured=" + (measured == 0 ? std::string("none") : std::to_string(measured));
    s += " target=" + std::to_string(target);
    return s;
}

Eigen::VectorXd Chart::embed(const std::vector<double>& point) const {
    const auto names = coordinates();
    const auto ks = kinds();
    const auto fr = free();
    if (point.size() != fr.size())
        throw InvalidArgument("chart expects " + std::to_string(fr.size()) + " free coordinates, got " +
                              std::to_string(point.size()));
    Eigen::VectorXd x(static_cast<Eigen::Index>(names.size()));
    std::size_t p = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto it = frozen.find(names[i]);
        const double v = it != frozen.end() ? it->second : point[p++];
        if (!in_range(ks[i], v)) throw OutOfRange("coordinate '" + names[i] + "' = " + fmt17(v) + " outside chart domain");
        x(static_cast<Eigen::Index>(i)) = v;
    }
    return x;
}

double chart_eval(const Chart& chart, const std::vector<double>& point) {
    const Eigen::VectorXd x = chart.embed(point);
    std::array<double, 6> a{};
    for (Eigen::Index i = 0; i < x.size(); ++i) a[static_cast<std::size_t>(i)] = x(i);
    return chart_eval_t(chart, a);
}

double l1(const ReducedPoint& p) { return l1_t(p.omega, p.beta1, p.beta2); }

Eigen::Vector3d l1_grad(const ReducedPoint& p) {
    const double so = std::sin(p.omega), co = std::cos(p.omega);
    const double s1 = std::sin(p.beta1), c1 = std::cos(p.beta1);
    const double sh = std::sin(0.5 * p.beta1);
    const double s22 = std::sin(2.0 * p.beta2), c22 = std::cos(2.0 * p.beta2);
    Eigen::Vector3d g;
    g(0) = 0.5 * so * s1 * sh * sh * s22;
    g(1) = 0.125 * (1.0 + 3.0 * c22) * std::sin(2.0 * p.beta1) - 0.25 * co * (c1 - std::cos(2.0 * p.beta1)) * s22;
    g(2) = 0.125 * (1.0 + 3.0 * std::cos(2.0 * p.beta1)) * s22 - 0.5 * co * s1 * c22 * (1.0 - c1);
    return g;
}

Eigen::Matrix3d l1_hessian(const ReducedPoint& p) {
    const double so = std::sin(p.omega), co = std::cos(p.omega);
    const double s1 = std::sin(p.beta1), c1 = std::cos(p.beta1);
    const double sh2 = std::pow(std::sin(0.5 * p.beta1), 2);
    const double s2 = std::sin(p.beta2), c2 = std::cos(p.beta2);
    const double s21 = std::sin(2.0 * p.beta1), c21 = std::cos(2.0 * p.beta1);
    const double s22 = std::sin(2.0 * p.beta2), c22 = std::cos(2.0 * p.beta2);
    Eigen::Matrix3d h;
    h(0, 0) = 0.5 * co * sh2 * s1 * s22;
    h(0, 1) = so * sh2 * s2 * (2.0 * c1 + 1.0) * c2;
    h(0, 2) = so * sh2 * s1 * c22;
    h(1, 1) = 0.25 * (co * (s1 - 2.0 * s21) * s22 + c21 * (3.0 * c22 + 1.0));
    h(1, 2) = -co * sh2 * (2.0 * c1 + 1.0) * c22 - 0.75 * s21 * s22;
    h(2, 2) = 2.0 * co * s1 * s22 * sh2 + 0.25 * (3.0 * c21 + 1.0) * c22;
    h(1, 0) = h(0, 1);
    h(2, 0) = h(0, 2);
    h(2, 1) = h(1, 2);
    return h;
}

double m_func(double beta1, double beta2) { return m_func_t(beta1, beta2); }

double m_landscape(const ReducedPoint& p) { return m_landscape_t(p.omega, p.beta1, p.beta2); }

double p13_objective(double beta1) { return std::pow(std::sin(0.5 * beta1), 4); }

P13Maximum maximize_p13() {
    const auto r = boost::math::tools::brent_find_minima([](double b) { return -p13_objective(b); }, 0.0, kPi,
                                                         std::numeric_limits<double>::digits);
    return {r.first, -r.second};
}

namespace {

enum class Side { Central, Forward, Backward };

Side side_for(const Box* box, const Eigen::VectorXd& x, Eigen::Index i, double h) {
    if (!box) return Side::Central;
    if (x(i) - 2.0 * h < box->lo(i)) return Side::Forward;
    if (x(i) + 2.0 * h > box->hi(i)) return Side::Backward;
    return Side::Central;
}

double partial(const ScalarFn& f, Eigen::VectorXd x, Eigen::Index i, double h, Side side, double f0) {
    const double xi = x(i);
    auto at = [&](double d) {
        x(i) = xi + d;
        return f(x);
    };
    switch (side) {
        case Side::Central: return (at(h) - at(-h)) / (2.0 * h);
        case Side::Forward: return (-3.0 * f0 + 4.0 * at(h) - at(2.0 * h)) / (2.0 * h);
        case Side::Backward: return (3.0 * f0 - 4.0 * at(-h) + at(-2.0 * h)) / (2.0 * h);
    }
    return 0.0;
}

}  // namespace

Eigen::VectorXd numeric_grad(const ScalarFn& f, const Eigen::VectorXd& x, double h, const Box* box) {
    const double f0 = f(x);
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = partial(f, x, i, h, side_for(box, x, i, h), f0);
    return g;
}

Eigen::MatrixXd numeric_hessian(const ScalarFn& f, const Eigen::VectorXd& x, double h, const Box* box) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd H(n, n);
    bool interior = true;
    for (Eigen::Index i = 0; i < n; ++i) interior = interior && side_for(box, x, i, h) == Side::Central;

    if (interior) {
        const double f0 = f(x);
        Eigen::VectorXd y = x;
        for (Eigen::Index i = 0; i < n; ++i) {
            y(i) = x(i) + h;
            const double fp = f(y);
            y(i) = x(i) - h;
            const double fm = f(y);
            y(i) = x(i);
            H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
            for (Eigen::Index k = 0; k < i; ++k) {
                double s = 0.0;
                for (int a : {1, -1})
                    for (int b : {1, -1}) {
                        y(i) = x(i) + a * h;
                        y(k) = x(k) + b * h;
                        s += a * b * f(y);
                    }
                y(i) = x(i);
                y(k) = x(k);
                H(i, k) = H(k, i) = s / (4.0 * h * h);
            }
        }
        return H;
    }

    // near a bound: difference the gradient, one-sided where needed
    for (Eigen::Index i = 0; i < n; ++i) {
        const Side s = side_for(box, x, i, h);
        auto grad_at = [&](double d) {
            Eigen::VectorXd y = x;
            y(i) += d;
            return numeric_grad(f, y, h, box);
        };
        Eigen::VectorXd col;
        if (s == Side::Central)
            col = (grad_at(h) - grad_at(-h)) / (2.0 * h);
        else if (s == Side::Forward)
            col = (-3.0 * numeric_grad(f, x, h, box) + 4.0 * grad_at(h) - grad_at(2.0 * h)) / (2.0 * h);
        else
            col = (3.0 * numeric_grad(f, x, h, box) - 4.0 * grad_at(-h) + grad_at(-2.0 * h)) / (2.0 * h);
        H.col(i) = col;
    }
    return 0.5 * (H + H.transpose());
}

Landscape::Landscape(Chart chart) : chart_(std::move(chart)) {
    chart_.validate();
    names_ = chart_.coordinates();
    kinds_ = chart_.kinds();
    const int n = dim();
    base_ = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const auto it = chart_.frozen.find(names_[i]);
        if (it != chart_.frozen.end()) base_(i) = it->second;
        if (it == chart_.frozen.end()) free_.push_back(i);
        if (it == chart_.frozen.end() || chart_.surface.count(names_[i])) stationary_.push_back(i);
    }
    folds_.assign(static_cast<std::size_t>(n), {});
    switch (chart_.kind) {
        case ChartKind::Full:
            // D(a, -b, g) = D(a + pi, b, g - pi)
            folds_[1] = {{0, kPi}, {2, -kPi}};
            folds_[4] = {{3, kPi}, {5, -kPi}};
            break;
        case ChartKind::L1:
            folds_[1] = {{0, kPi}};
            folds_[2] = {{0, kPi}};
            break;
        case ChartKind::M:
        case ChartKind::MEnvelope:
            break;  // even in each polar angle
    }
}

Eigen::VectorXd Landscape::embed_free(const Eigen::VectorXd& free_values) const {
    Eigen::VectorXd x = base_;
    for (std::size_t k = 0; k < free_.size(); ++k) x(free_[k]) = free_values(static_cast<Eigen::Index>(k));
    return x;
}

Eigen::VectorXd Landscape::free_part(const Eigen::VectorXd& full) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t k = 0; k < free_.size(); ++k) v(static_cast<Eigen::Index>(k)) = full(free_[k]);
    return v;
}

double Landscape::value(const Eigen::VectorXd& full) const {
    std::array<double, 6> a{};
    for (int i = 0; i < dim(); ++i) a[static_cast<std::size_t>(i)] = full(i);
    return chart_eval_t(chart_, a);
}

Landscape::Derivs Landscape::derivatives(const Eigen::VectorXd& full) const {
    const int ns = static_cast<int>(stationary_.size());
    std::array<Jet, 6> a{};
    for (int i = 0; i < dim(); ++i) a[static_cast<std::size_t>(i)] = Jet(full(i));
    for (int p = 0; p < ns; ++p)
        a[static_cast<std::size_t>(stationary_[p])] = Jet::variable(full(stationary_[p]), p, ns);
    const Jet r = chart_eval_t(chart_, a);
    Derivs d;
    d.value = r.v;
    d.grad.resize(ns);
    d.hess.resize(ns, ns);
    for (int i = 0; i < ns; ++i) {
        d.grad(i) = r.grad(i);
        for (int k = 0; k < ns; ++k) d.hess(i, k) = r.hess(i, k);
    }
    return d;
}

}  // namespace kinscape
