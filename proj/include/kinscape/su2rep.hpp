#pragma once

// Spin-1 representation of SU(2): generators, closed-form exponentials,
// Euler-angle rotation matrices and decomposition of a unitary back into
// Euler angles up to a global phase.

#include <cmath>
#include <string>
#include <string_view>

#include "kinscape/matrix3.hpp"

namespace kinscape {

enum class Axis { X, Y, Z };

// ZYZ: e^{-i a Jz} e^{-i b Jy} e^{-i g Jz};  YZY: e^{-i a Jy} e^{-i b Jz} e^{-i g Jy}.
enum class Convention { ZYZ, YZY };

std::string_view to_string(Convention c);
Convention parse_convention(std::string_view s);

// Reduces an angle into (-pi, pi].
double wrap_angle(double x);

// Euler triple normalized on construction: alpha, gamma in (-pi, pi],
// beta in [0, pi]. Negative beta is folded with D(a, -b, g) = D(a+pi, b, g-pi).
class EulerAngles {
public:
    EulerAngles() = default;
    EulerAngles(double alpha, double beta, double gamma, Convention conv = Convention::ZYZ);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    Convention convention() const { return conv_; }

private:
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double gamma_ = 0.0;
    Convention conv_ = Convention::ZYZ;
};

struct RMembership {
    bool in_R = false;
    bool in_B = false;
    double global_phase = 0.0;  // U = e^{i phase} D(angles)
    EulerAngles angles;
    double residual = 0.0;      // Frobenius norm of U - e^{i phase} D(angles)
};

Matrix3C generator(Axis axis);
Matrix3C exp_jy(double phi);
Matrix3C exp_jz(double phi);
Matrix3C d_matrix(const EulerAngles& angles);

// Throws NotInR when no decomposition reproduces u within 1e-8, and
// InvalidArgument when u is not unitary within 1e-10.
RMembership euler_from_unitary(const Matrix3C& u, Convention conv);

// Non-throwing membership query.
RMembership r_membership(const Matrix3C& u, Convention conv);

// Closed forms over a generic real scalar (double or Jet).
template <class S>
Mat3<S> exp_jy_t(const S& phi) {
    using std::cos;
    using std::sin;
    const S c = cos(phi);
    const S s = sin(phi);
    const double r = 1.0 / std::sqrt(2.0);
    const S one(1.0);
    const S zero(0.0);
    const S half_plus = 0.5 * (one + c);
    const S half_minus = 0.5 * (one - c);
    const S rs = r * s;
    Mat3<S> m{};
    m[0][0] = {half_plus, zero};
    m[0][1] = {-rs, zero};
    m[0][2] = {half_minus, zero};
    m[1][0] = {rs, zero};
    m[1][1] = {c, zero};
    m[1][2] = {-rs, zero};
    m[2][0] = {half_minus, zero};
    m[2][1] = {rs, zero};
    m[2][2] = {half_plus, zero};
    return m;
}

template <class S>
Mat3<S> exp_jz_t(const S& phi) {
    Mat3<S> m{};
    const S zero(0.0);
    for (auto& row : m)
        for (auto& e : row) e = {zero, zero};
    m[0][0] = expi<S>(-phi);
    m[1][1] = {S(1.0), zero};
    m[2][2] = expi<S>(phi);
    return m;
}

// ZYZ matrix in its explicit closed form.
template <class S>
Mat3<S> d_matrix_zyz_t(const S& a, const S& b, const S& g) {
    using std::cos;
    using std::sin;
    const double r = 1.0 / std::sqrt(2.0);
    const S cb = cos(b);
    const S ch = cos(0.5 * b);
    const S sh = sin(0.5 * b);
    const S ch2 = ch * ch;
    const S sh2 = sh * sh;
    const S rs = r * sin(b);
    const S zero(0.0);
    auto scaled = [](const S& k, const Cx<S>& z) { return Cx<S>{k * z.re, k * z.im}; };
    Mat3<S> m{};
    m[0][0] = scaled(ch2, expi<S>(-(a + g)));
    m[0][1] = scaled(-rs, expi<S>(-a));
    m[0][2] = scaled(sh2, expi<S>(g - a));
    m[1][0] = scaled(rs, expi<S>(-g));
    m[1][1] = {cb, zero};
    m[1][2] = scaled(-rs, expi<S>(g));
    m[2][0] = scaled(sh2, expi<S>(a - g));
    m[2][1] = scaled(rs, expi<S>(a));
    m[2][2] = scaled(ch2, expi<S>(a + g));
    return m;
}

template <class S>
Mat3<S> d_matrix_yzy_t(const S& a, const S& b, const S& g) {
    return matmul(matmul(exp_jy_t(a), exp_jz_t(b)), exp_jy_t(g));
}

template <class S>
Mat3<S> d_matrix_t(Convention conv, const S& a, const S& b, const S& g) {
    return conv == Convention::ZYZ ? d_matrix_zyz_t(a, b, g) : d_matrix_yzy_t(a, b, g);
}

}  // namespace kinscape
