#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace kinscape {

using cplx = std::complex<double>;

// 3x3 complex matrix: unitaries, Hamiltonians, density matrices.
using Matrix3C = Eigen::Matrix3cd;
using Vector3C = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;

inline Matrix3C dagger(const Matrix3C& m) { return m.adjoint(); }

inline double unitarity_defect(const Matrix3C& u) {
    return (u.adjoint() * u - Matrix3C::Identity()).norm();
}

inline bool is_unitary(const Matrix3C& u, double tol = 1e-12) {
    return u.allFinite() && unitarity_defect(u) <= tol;
}

inline bool is_hermitian(const Matrix3C& m, double tol = 1e-12) {
    return (m - m.adjoint()).norm() <= tol;
}

// Projector |k><k| onto basis state k in {1, 2, 3}.
inline Matrix3C basis_projector(int k) {
    Matrix3C p = Matrix3C::Zero();
    p(k - 1, k - 1) = 1.0;
    return p;
}

// Minimal complex arithmetic over an arbitrary real scalar, so that the same
// closed forms can be evaluated with double or with Jet.
template <class S>
struct Cx {
    S re{};
    S im{};
};

template <class S>
Cx<S> operator+(const Cx<S>& a, const Cx<S>& b) { return {a.re + b.re, a.im + b.im}; }
template <class S>
Cx<S> operator-(const Cx<S>& a, const Cx<S>& b) { return {a.re - b.re, a.im - b.im}; }
template <class S>
Cx<S> operator-(const Cx<S>& a) { return {-a.re, -a.im}; }
template <class S>
Cx<S> operator*(const Cx<S>& a, const Cx<S>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class S>
Cx<S> operator*(const S& s, const Cx<S>& a) { return {s * a.re, s * a.im}; }
template <class S>
Cx<S> conj(const Cx<S>& a) { return {a.re, -a.im}; }
template <class S>
S norm2(const Cx<S>& a) { return a.re * a.re + a.im * a.im; }

// e^{i theta}
template <class S>
Cx<S> expi(const S& theta) {
    using std::cos;
    using std::sin;
    return {cos(theta), sin(theta)};
}

template <class S>
using Mat3 = std::array<std::array<Cx<S>, 3>, 3>;

template <class S>
Mat3<S> matmul(const Mat3<S>& a, const Mat3<S>& b) {
    Mat3<S> r{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            Cx<S> acc = a[i][0] * b[0][k];
            acc = acc + a[i][1] * b[1][k];
            acc = acc + a[i][2] * b[2][k];
            r[i][k] = acc;
        }
    return r;
}

inline Matrix3C to_eigen(const Mat3<double>& m) {
    Matrix3C r;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r(i, k) = cplx(m[i][k].re, m[i][k].im);
    return r;
}

inline Mat3<double> from_eigen(const Matrix3C& m) {
    Mat3<double> r{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r[i][k] = {m(i, k).real(), m(i, k).imag()};
    return r;
}

}  // namespace kinscape
