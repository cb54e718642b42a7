#include "kinscape/su2rep.hpp"

#include <array>
#include <limits>

#include "kinscape/error.hpp"

namespace kinscape {

std::string_view to_string(Convention c) { return c == Convention::ZYZ ? "zyz" : "yzy"; }

Convention parse_convention(std::string_view s) {
    if (s == "zyz" || s == "ZYZ") return Convention::ZYZ;
    if (s == "yzy" || s == "YZY") return Convention::YZY;
    throw InvalidArgument("unknown Euler convention '" + std::string(s) + "'");
}

double wrap_angle(double x) {
    double r = std::remainder(x, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

EulerAngles::EulerAngles(double alpha, double beta, double gamma, Convention conv) : conv_(conv) {
    double b = wrap_angle(beta);
    if (b < 0.0) {
        b = -b;
        alpha += kPi;
        gamma -= kPi;
    }
    alpha_ = wrap_angle(alpha);
    beta_ = b;
    gamma_ = wrap_angle(gamma);
}

Matrix3C generator(Axis axis) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    Matrix3C m = Matrix3C::Zero();
    switch (axis) {
        case Axis::X:
            m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = r;
            break;
        case Axis::Y:
            m(0, 1) = -i * r;
            m(1, 0) = i * r;
            m(1, 2) = -i * r;
            m(2, 1) = i * r;
            break;
        case Axis::Z:
            m(0, 0) = 1.0;
            m(2, 2) = -1.0;
            break;
    }
    return m;
}

Matrix3C exp_jy(double phi) { return to_eigen(exp_jy_t(phi)); }

Matrix3C exp_jz(double phi) { return to_eigen(exp_jz_t(phi)); }

Matrix3C d_matrix(const EulerAngles& e) {
    return to_eigen(d_matrix_t(e.convention(), e.alpha(), e.beta(), e.gamma()));
}

namespace {

// Rotation by pi about (y + z)/sqrt(2); conjugation by it swaps Jy and Jz.
const Matrix3C& yz_swap() {
    static const Matrix3C w = [] {
        const Matrix3C k = (generator(Axis::Y) + generator(Axis::Z)) / std::sqrt(2.0);
        // spin-1: exp(-i pi K) = I - 2 K^2 for a unit-axis generator K
        return Matrix3C(Matrix3C::Identity() - 2.0 * k * k);
    }();
    return w;
}

struct Candidate {
    double phase = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double residual = std::numeric_limits<double>::infinity();
};

double reconstruction_residual(const Matrix3C& u, double phase, double a, double b, double g) {
    const Matrix3C d = to_eigen(d_matrix_zyz_t(a, b, g));
    return (u - std::polar(1.0, phase) * d).norm();
}

// ZYZ decomposition of u up to global phase. Tries the three cube-root
// phases of det(u) and several angle-extraction routes, keeping the one that
// reconstructs u best.
Candidate decompose_zyz(const Matrix3C& u) {
    const double r2 = std::sqrt(2.0);
    const double base_phase = std::arg(u.determinant()) / 3.0;

    Candidate best;
    Candidate degenerate_zero;
    Candidate degenerate_pi;
    for (int k = 0; k < 3; ++k) {
        const double phase = wrap_angle(base_phase + 2.0 * kPi * k / 3.0);
        const Matrix3C d = std::polar(1.0, -phase) * u;

        const double cb = d(1, 1).real();
        const double sb = r2 * 0.25 * (std::abs(d(0, 1)) + std::abs(d(1, 0)) + std::abs(d(1, 2)) + std::abs(d(2, 1)));
        const double beta = std::atan2(sb, cb);

        // sum = alpha + gamma from the diagonal corners, diff = alpha - gamma
        // from the anti-diagonal corners
        const double sum = -std::arg(d(0, 0) + std::conj(d(2, 2)));
        const double diff = -std::arg(d(0, 2) + std::conj(d(2, 0)));

        std::array<std::array<double, 2>, 4> routes{};
        routes[0] = {std::arg(d(2, 1) - std::conj(d(0, 1))), std::arg(std::conj(d(1, 0)) - d(1, 2))};
        routes[1] = {0.5 * (sum + diff), 0.5 * (sum - diff)};
        routes[2] = {0.5 * (sum + diff) + kPi, 0.5 * (sum - diff) + kPi};
        routes[3] = {routes[0][0], sum - routes[0][0]};

        for (const auto& [a, g] : routes) {
            const double res = reconstruction_residual(u, phase, a, beta, g);
            if (res < best.residual) best = {phase, a, beta, g, res};
        }

        const double res0 = reconstruction_residual(u, phase, sum, 0.0, 0.0);
        if (res0 < degenerate_zero.residual) degenerate_zero = {phase, sum, 0.0, 0.0, res0};
        const double resp = reconstruction_residual(u, phase, diff, kPi, 0.0);
        if (resp < degenerate_pi.residual) degenerate_pi = {phase, diff, kPi, 0.0, resp};
    }

    // On the degenerate sets report the canonical split (sum, 0, 0) or (diff, pi, 0).
    constexpr double kSnap = 1e-9;
    if (best.beta < kSnap && degenerate_zero.residual <= 1e-10) return degenerate_zero;
    if (kPi - best.beta < kSnap && degenerate_pi.residual <= 1e-10) return degenerate_pi;
    if (degenerate_zero.residual < best.residual) return degenerate_zero;
    if (degenerate_pi.residual < best.residual) return degenerate_pi;
    return best;
}

}  // namespace

RMembership r_membership(const Matrix3C& u, Convention conv) {
    RMembership m;
    if (!u.allFinite()) return m;

    const Candidate z = decompose_zyz(u);
    Candidate c = z;
    if (conv == Convention::YZY) {
        const Matrix3C& w = yz_swap();
        c = decompose_zyz(w.adjoint() * u * w);
    }

    constexpr double kFitTol = 1e-8;
    m.residual = c.residual;
    m.in_R = c.residual <= kFitTol;
    if (!m.in_R) return m;
    m.global_phase = wrap_angle(c.phase);
    m.angles = EulerAngles(c.alpha, c.beta, c.gamma, conv);
    m.in_B = z.residual <= kFitTol && z.beta < 1e-8;
    return m;
}

RMembership euler_from_unitary(const Matrix3C& u, Convention conv) {
    if (!u.allFinite() || unitarity_defect(u) > 1e-10)
        throw InvalidArgument("euler_from_unitary: input is not unitary within 1e-10");
    RMembership m = r_membership(u, conv);
    if (!m.in_R) throw NotInR("unitary is not in the spin-1 image of SU(2) up to phase");
    return m;
}

}  // namespace kinscape
