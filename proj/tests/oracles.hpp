#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the Eigen types.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;
using M3 = Eigen::Matrix3cd;
using V3 = Eigen::Vector3cd;

inline const double pi = std::acos(-1.0);

// Spin-1 angular momentum from the ladder operators, basis m = 1, 0, -1.
inline M3 jplus() {
    M3 j = M3::Zero();
    j(0, 1) = std::sqrt(2.0);
    j(1, 2) = std::sqrt(2.0);
    return j;
}
inline M3 jx() { return 0.5 * (jplus() + jplus().adjoint()); }
inline M3 jy() { return cplx(0.0, -0.5) * (jplus() - jplus().adjoint()); }
inline M3 jz() { return Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal(); }

inline M3 rot(const M3& gen, double phi) {
    const M3 a = cplx(0.0, -phi) * gen;
    return a.exp();
}

inline M3 zyz(double a, double b, double g) { return rot(jz(), a) * rot(jy(), b) * rot(jz(), g); }
inline M3 yzy(double a, double b, double g) { return rot(jy(), a) * rot(jz(), b) * rot(jy(), g); }

// Haar unitary: QR of a complex Ginibre matrix with the phases of R divided out.
inline M3 haar(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    M3 z;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) z(i, j) = cplx(n(rng), n(rng));
    Eigen::HouseholderQR<M3> qr(z);
    M3 q = qr.householderQ();
    const M3 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 3; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
    return q;
}

// Superoperator of rho -> U rho U^dagger acting on column-stacked vec(rho).
inline Eigen::Matrix<cplx, 9, 9> unitary_super(const M3& u) {
    return Eigen::kroneckerProduct(u.conjugate(), u).eval();
}

// rho -> P rho P + Q rho Q with P = |k><k|, Q = I - P.
inline Eigen::Matrix<cplx, 9, 9> dephase_super(int k) {
    M3 p = M3::Zero();
    p(k - 1, k - 1) = 1.0;
    const M3 q = M3::Identity() - p;
    return (Eigen::kroneckerProduct(p, p) + Eigen::kroneckerProduct(q, q)).eval();
}

// P(1 -> target) through composed superoperators; measured = 0 skips the measurement.
inline double channel_probability(const M3& u1, int measured, const M3& u2, int target) {
    Eigen::Matrix<cplx, 9, 1> rho = Eigen::Matrix<cplx, 9, 1>::Zero();
    rho(0) = 1.0;
    Eigen::Matrix<cplx, 9, 9> s = unitary_super(u1);
    if (measured != 0) s = dephase_super(measured) * s;
    s = unitary_super(u2) * s;
    const Eigen::Matrix<cplx, 9, 1> out = s * rho;
    const int t = target - 1;
    return out(t + 3 * t).real();
}

// Five-point stencils.
using Fn = std::function<double(const Eigen::VectorXd&)>;

inline Eigen::VectorXd fd_grad(const Fn& f, Eigen::VectorXd x, double h = 1e-3) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double x0 = x(i);
        auto at = [&](double d) {
            x(i) = x0 + d;
            const double v = f(x);
            x(i) = x0;
            return v;
        };
        g(i) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    }
    return g;
}

inline Eigen::MatrixXd fd_hessian(const Fn& f, const Eigen::VectorXd& x, double h = 1e-3) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hm(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        auto gj = [&](double d) {
            Eigen::VectorXd y = x;
            y(j) += d;
            return fd_grad(f, y, h);
        };
        hm.col(j) = (-gj(2 * h) + 8 * gj(h) - 8 * gj(-h) + gj(-2 * h)) / (12 * h);
    }
    return 0.5 * (hm + hm.transpose());
}

// Two-level transfer |0> -> cos(dphi/2)|0> + sin(dphi/2)|1> with one
// non-selective measurement along an arbitrary Bloch direction in between;
// the direction is optimized by a grid scan and a shrinking pattern search.
inline double two_level_single_measurement_max(double dphi) {
    using M2 = Eigen::Matrix2cd;
    const M2 sx = (M2() << 0, 1, 1, 0).finished();
    const M2 sy = (M2() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    const M2 sz = (M2() << 1, 0, 0, -1).finished();
    M2 rho0 = M2::Zero();
    rho0(0, 0) = 1.0;
    const Eigen::Vector2cd target(std::cos(dphi / 2), std::sin(dphi / 2));
    auto prob = [&](double th, double ph) {
        const M2 n = std::sin(th) * std::cos(ph) * sx + std::sin(th) * std::sin(ph) * sy + std::cos(th) * sz;
        const M2 p = 0.5 * (M2::Identity() + n);
        const M2 q = M2::Identity() - p;
        const M2 rho = p * rho0 * p + q * rho0 * q;
        return (target.adjoint() * rho * target)(0, 0).real();
    };
    double bt = 0, bp = 0, best = -1;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j < 200; ++j) {
            const double th = pi * i / 200, ph = 2 * pi * j / 200;
            const double v = prob(th, ph);
            if (v > best) best = v, bt = th, bp = ph;
        }
    for (double step = 0.05; step > 1e-9; step *= 0.5) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (int d = 0; d < 4; ++d) {
                const double th = bt + (d == 0 ? step : d == 1 ? -step : 0.0);
                const double ph = bp + (d == 2 ? step : d == 3 ? -step : 0.0);
                const double v = prob(th, ph);
                if (v > best + 1e-15) best = v, bt = th, bp = ph, moved = true;
            }
        }
    }
    return best;
}

}  // namespace oracle
