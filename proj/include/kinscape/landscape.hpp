#pragma once

// Transition-probability landscapes over Euler-angle charts, the reduced
// closed forms, and finite-difference derivatives.

#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kinscape/jet.hpp"
#include "kinscape/quantum.hpp"
#include "kinscape/su2rep.hpp"

namespace kinscape {

// Full: the six Euler angles (a1 b1 g1 a2 b2 g2) of U(1), U(2).
// L1:   reduced (o b1 b2) with o = a1 + g2, measured 1, target 2.
// M:    reduced (o b1 b2), measured 2, target 2.
// MEnvelope: (b1 b2), the sup over o of M.
enum class ChartKind { Full, L1, M, MEnvelope };

std::string_view to_string(ChartKind k);
ChartKind parse_chart_kind(std::string_view s);

enum class CoordKind { Periodic, Polar };

struct Chart {
    ChartKind kind = ChartKind::Full;
    Convention conv1 = Convention::ZYZ;
    Convention conv2 = Convention::ZYZ;
    std::map<std::string, double> frozen;
    // Frozen coordinates that still enter the stationarity condition and the
    // Hessian (critical points "on a surface" of a larger chart).
    std::set<std::string> surface;
    int measured = 1;  // 0: no measurement
    int target = 2;

    std::vector<std::string> coordinates() const;
    std::vector<CoordKind> kinds() const;
    std::vector<std::string> free() const;
    std::vector<std::string> stationary() const;  // free and surface, chart order

    // Throws InvalidArgument on unknown names, bad indices or frozen values out of range.
    void validate() const;
    std::string descriptor() const;

    // Full coordinate vector from free-coordinate values; OutOfRange when a value
    // leaves [-pi, pi] (angles) or [0, pi] (polar angles).
    Eigen::VectorXd embed(const std::vector<double>& point) const;
};

// Kinematic probability on a chart, with the frozen coordinates substituted.
double chart_eval(const Chart& chart, const std::vector<double>& point);

struct ReducedPoint {
    double omega = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

template <class S>
S l1_t(const S& om, const S& b1, const S& b2) {
    using std::cos;
    using std::sin;
    const S s1 = sin(b1);
    const S s2 = sin(b2);
    const S c2 = cos(b2);
    const S sh = sin(0.5 * b1);
    return 0.125 * (s2 * s2) * (3.0 + cos(2.0 * b1)) + 0.5 * (s1 * s1) * (c2 * c2) -
           0.5 * cos(om) * s1 * (sh * sh) * sin(2.0 * b2);
}

// Measured 2, target 2 on ZYZ x ZYZ; depends on o = a1 + g2.
template <class S>
S m_landscape_t(const S& om, const S& b1, const S& b2) {
    using std::cos;
    using std::sin;
    const S s1 = sin(b1);
    const S s2 = sin(b2);
    const S c2 = cos(b2);
    const S s1s = s1 * s1;
    const S s2s = s2 * s2;
    return 0.5 * s1s * (c2 * c2) + 0.125 * (3.0 + cos(2.0 * b1)) * s2s - 0.25 * cos(2.0 * om) * s1s * s2s;
}

template <class S>
S m_func_t(const S& b1, const S& b2) {
    using std::cos;
    using std::sin;
    const S s1 = sin(b1);
    const S s2 = sin(b2);
    const S c2 = cos(b2);
    return 0.5 * ((s1 * s1) * (c2 * c2) + s2 * s2);
}

template <class S>
S chart_eval_t(const Chart& chart, const std::array<S, 6>& x) {
    switch (chart.kind) {
        case ChartKind::Full: {
            const Mat3<S> u1 = d_matrix_t(chart.conv1, x[0], x[1], x[2]);
            const Mat3<S> u2 = d_matrix_t(chart.conv2, x[3], x[4], x[5]);
            return transition_probability_t(u1, chart.measured, u2, chart.target);
        }
        case ChartKind::L1:
            return l1_t(x[0], x[1], x[2]);
        case ChartKind::M:
            return m_landscape_t(x[0], x[1], x[2]);
        case ChartKind::MEnvelope:
            return m_func_t(x[0], x[1]);
    }
    return S(0.0);
}

double l1(const ReducedPoint& p);
Eigen::Vector3d l1_grad(const ReducedPoint& p);
Eigen::Matrix3d l1_hessian(const ReducedPoint& p);

// ½(sin²b1 cos²b2 + sin²b2): the supremum over o of m_landscape.
double m_func(double beta1, double beta2);
double m_landscape(const ReducedPoint& p);

// |<3|U(1)|1>|² = sin⁴(b1/2)
double p13_objective(double beta1);

struct P13Maximum {
    double beta1 = 0.0;
    double value = 0.0;
};

// Brent maximization of p13_objective over [0, pi].
P13Maximum maximize_p13();

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

// Optional box used to switch to one-sided stencils within 2h of a bound.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

Eigen::VectorXd numeric_grad(const ScalarFn& f, const Eigen::VectorXd& x, double h = 1e-5, const Box* box = nullptr);
Eigen::MatrixXd numeric_hessian(const ScalarFn& f, const Eigen::VectorXd& x, double h = 1e-4,
                                const Box* box = nullptr);

struct FoldPartner {
    int index;
    double shift;
};

// A chart prepared for critical-point work. Coordinates are indexed in chart
// order; derivatives are taken with respect to the stationary subset.
class Landscape {
public:
    explicit Landscape(Chart chart);

    const Chart& chart() const { return chart_; }
    int dim() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<CoordKind>& kinds() const { return kinds_; }
    const std::vector<int>& free() const { return free_; }
    const std::vector<int>& stationary() const { return stationary_; }
    const Eigen::VectorXd& base() const { return base_; }
    // Sign flip of polar coordinate i is undone by shifting these partners.
    const std::vector<FoldPartner>& fold_partners(int i) const { return folds_[i]; }

    Eigen::VectorXd embed_free(const Eigen::VectorXd& free_values) const;
    Eigen::VectorXd free_part(const Eigen::VectorXd& full) const;

    double value(const Eigen::VectorXd& full) const;

    struct Derivs {
        double value = 0.0;
        Eigen::VectorXd grad;  // over stationary()
        Eigen::MatrixXd hess;  // over stationary()
    };
    Derivs derivatives(const Eigen::VectorXd& full) const;

private:
    Chart chart_;
    std::vector<std::string> names_;
    std::vector<CoordKind> kinds_;
    std::vector<int> free_;
    std::vector<int> stationary_;
    Eigen::VectorXd base_;
    std::vector<std::vector<FoldPartner>> folds_;
};

}  // namespace kinscape
