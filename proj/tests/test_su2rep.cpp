#include <doctest.h>

#include <random>

#include "kinscape/error.hpp"
#include "kinscape/su2rep.hpp"
#include "oracles.hpp"

using namespace kinscape;

namespace {

double dist(const Matrix3C& a, const Matrix3C& b) { return (a - b).norm(); }

double uni(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

TEST_SUITE("su2rep") {

TEST_CASE("generators match the ladder-operator construction") {
    CHECK(dist(generator(Axis::X), oracle::jx()) < 1e-15);
    CHECK(dist(generator(Axis::Y), oracle::jy()) < 1e-15);
    CHECK(dist(generator(Axis::Z), oracle::jz()) < 1e-15);
    const Matrix3C x = generator(Axis::X), y = generator(Axis::Y), z = generator(Axis::Z);
    CHECK(dist(x * y - y * x, cplx(0, 1) * z) < 1e-14);
    CHECK(dist(y * z - z * y, cplx(0, 1) * x) < 1e-14);
    // Casimir j(j+1) = 2
    CHECK(dist(x * x + y * y + z * z, 2.0 * Matrix3C::Identity()) < 1e-14);
}

TEST_CASE("closed-form exponentials agree with the matrix exponential") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const double phi = uni(rng, -7.0, 7.0);
        CHECK(dist(exp_jy(phi), oracle::rot(oracle::jy(), phi)) < 1e-13);
        CHECK(dist(exp_jz(phi), oracle::rot(oracle::jz(), phi)) < 1e-13);
    }
}

TEST_CASE("rotation matrices in both conventions") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        const double a = uni(rng, -kPi, kPi), b = uni(rng, 0.0, kPi), g = uni(rng, -kPi, kPi);
        CHECK(dist(d_matrix(EulerAngles(a, b, g, Convention::ZYZ)), oracle::zyz(a, b, g)) < 1e-12);
        CHECK(dist(d_matrix(EulerAngles(a, b, g, Convention::YZY)), oracle::yzy(a, b, g)) < 1e-12);
    }
}

TEST_CASE("angle normalization keeps the rotation") {
    const EulerAngles e(0.3, -0.7, 0.2);
    CHECK(e.beta() == doctest::Approx(0.7));
    CHECK(e.alpha() > -kPi);
    CHECK(e.alpha() <= kPi);
    CHECK(dist(d_matrix(e), oracle::zyz(0.3, -0.7, 0.2)) < 1e-12);

    const EulerAngles w(7.0, 2.0, -9.0);
    CHECK(w.alpha() == doctest::Approx(7.0 - 2 * kPi));
    CHECK(w.gamma() == doctest::Approx(-9.0 + 2 * kPi));
    CHECK(dist(d_matrix(w), oracle::zyz(7.0, 2.0, -9.0)) < 1e-12);

    for (double x : {-10.0, -kPi, 0.0, kPi, 3 * kPi, 12.5}) {
        const double r = wrap_angle(x);
        CHECK(r > -kPi);
        CHECK(r <= kPi + 1e-15);
        CHECK(std::abs(std::remainder(r - x, 2 * kPi)) < 1e-12);
    }
}

TEST_CASE("decomposition reproduces phased rotations") {
    std::mt19937_64 rng(13);
    for (Convention conv : {Convention::ZYZ, Convention::YZY}) {
        for (int i = 0; i < 200; ++i) {
            const double a = uni(rng, -kPi, kPi), b = uni(rng, 0.02, kPi - 0.02), g = uni(rng, -kPi, kPi);
            const double ph = uni(rng, -kPi, kPi);
            const Matrix3C u = std::polar(1.0, ph) * oracle::zyz(a, b, g);
            const RMembership m = euler_from_unitary(u, conv);
            CHECK(m.in_R);
            const Matrix3C back = std::polar(1.0, m.global_phase) * d_matrix(m.angles);
            CHECK(dist(back, u) < 1e-10);
        }
    }
}

TEST_CASE("diagonal rotations sit in the singular set of the ZYZ chart") {
    for (double phi : {0.0, 0.4, -2.0, kPi}) {
        const Matrix3C u = oracle::rot(oracle::jz(), phi);
        const RMembership m = r_membership(u, Convention::ZYZ);
        CHECK(m.in_R);
        CHECK(m.in_B);
        CHECK(m.angles.beta() < 1e-8);
        CHECK(dist(std::polar(1.0, m.global_phase) * d_matrix(m.angles), u) < 1e-10);
    }
    const RMembership y = r_membership(oracle::rot(oracle::jy(), 0.9), Convention::ZYZ);
    CHECK_FALSE(y.in_B);
}

TEST_CASE("generic unitaries are not rotations") {
    std::mt19937_64 rng(14);
    int outside = 0;
    for (int i = 0; i < 20; ++i) {
        const Matrix3C u = oracle::haar(rng);
        const RMembership m = r_membership(u, Convention::ZYZ);
        if (!m.in_R) {
            ++outside;
            CHECK_THROWS_AS(euler_from_unitary(u, Convention::ZYZ), NotInR);
        }
    }
    CHECK(outside == 20);
}

TEST_CASE("non-unitary input is rejected") {
    Matrix3C m = Matrix3C::Identity();
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(euler_from_unitary(m, Convention::ZYZ), InvalidArgument);
}

TEST_CASE("convention names") {
    CHECK(parse_convention("zyz") == Convention::ZYZ);
    CHECK(parse_convention("YZY") == Convention::YZY);
    CHECK(to_string(Convention::YZY) == "yzy");
    CHECK_THROWS_AS(parse_convention("xyz"), InvalidArgument);
}

}
