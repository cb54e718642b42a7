#include <doctest.h>

#include <random>

#include "kinscape/dynamics.hpp"
#include "kinscape/error.hpp"
#include "kinscape/su2rep.hpp"
#include "oracles.hpp"

using namespace kinscape;

namespace {

double uni(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

PiecewiseControl random_control(std::mt19937_64& rng, int n, double dt) {
    std::vector<double> a(static_cast<std::size_t>(n));
    for (double& x : a) x = uni(rng, -2, 2);
    return PiecewiseControl(a, dt);
}

Vector3C random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector3C v(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
    return v.normalized();
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("Hamiltonians generate a spin-1 action plus a phase") {
    const auto sys = SystemHamiltonians::standard(0.7);
    CHECK((sys.h0 - (Matrix3C::Identity() - oracle::jz())).norm() < 1e-15);
    CHECK((sys.v - 0.7 * std::sqrt(2.0) * oracle::jx()).norm() < 1e-15);
}

TEST_CASE("step propagator equals the matrix exponential") {
    std::mt19937_64 rng(41);
    const auto sys = SystemHamiltonians::standard();
    for (int i = 0; i < 50; ++i) {
        const double f = uni(rng, -3, 3), dt = uni(rng, 0.01, 2.0);
        const oracle::M3 h = sys.h0 + f * sys.v;
        const oracle::M3 ref = (oracle::cplx(0, -dt) * h).exp();
        CHECK((step_propagator(f, dt, sys) - ref).norm() < 1e-13);
    }
}

TEST_CASE("propagators are phased rotations") {
    std::mt19937_64 rng(42);
    const auto sys = SystemHamiltonians::standard();
    for (int i = 0; i < 20; ++i) {
        const Matrix3C u = propagate(random_control(rng, 30, 0.2), sys);
        CHECK(unitarity_defect(u) < 1e-13);
        CHECK(r_membership(u, Convention::ZYZ).residual < 1e-10);
    }
}

TEST_CASE("conserved quantity along trajectories") {
    std::mt19937_64 rng(43);
    const auto sys = SystemHamiltonians::standard();
    for (int i = 0; i < 50; ++i) {
        const auto ctrl = random_control(rng, 60, 0.15);
        const auto traj = trajectory(ctrl, sys, StateVector::from(random_state(rng)));
        REQUIRE(traj.size() == 61);
        const double q0 = conserved_quantity(traj.front());
        const cplx z0 = conserved_complex(traj.front());
        for (std::size_t k = 0; k < traj.size(); ++k) {
            CHECK(std::abs(conserved_quantity(traj[k]) - q0) < 1e-12);
            // the complex form only picks up the phase of the identity part of H0
            CHECK(std::abs(conserved_complex(traj[k]) * std::polar(1.0, 2.0 * 0.15 * static_cast<double>(k)) - z0) < 1e-12);
        }
    }
    // (1, 0, 1)/sqrt(2) gives 1/2
    CHECK(conserved_quantity(StateVector::from(Vector3C(1, 0, 1) / std::sqrt(2.0))) == doctest::Approx(0.5));
}

TEST_CASE("dynamic and kinematic probabilities agree") {
    std::mt19937_64 rng(44);
    const auto sys = SystemHamiltonians::standard();
    for (int i = 0; i < 40; ++i) {
        const auto f1 = random_control(rng, 25, 0.3), f2 = random_control(rng, 25, 0.3);
        const std::optional<int> m = i % 4 ? std::optional<int>(i % 4) : std::nullopt;
        const double dyn = dynamic_transition_probability(f1, m, f2, 2, sys);
        const double kin = kinematic_transition_probability(propagate(f1, sys), m, propagate(f2, sys), 2);
        const double ref = oracle::channel_probability(propagate(f1, sys), m.value_or(0), propagate(f2, sys), 2);
        CHECK(std::abs(dyn - kin) < 1e-12);
        CHECK(std::abs(dyn - ref) < 1e-13);
    }
}

TEST_CASE("property suites") {
    const auto sys = SystemHamiltonians::standard();
    const auto c = conservation_suite(50, 40, 9, sys);
    CHECK(c.trajectories == 50);
    CHECK(c.max_drift < 1e-12);
    CHECK(c.max_phase_drift < 1e-12);
    const auto x = crosscheck_suite(40, 9, sys);
    CHECK(x.max_discrepancy < 1e-12);
}

TEST_CASE("control construction") {
    CHECK_THROWS_AS(PiecewiseControl({1.0}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(PiecewiseControl({std::nan("")}, 0.1), InvalidArgument);
    const auto c = PiecewiseControl::fourier({0.5}, 2.0, 4);
    for (double a : c.amplitudes()) CHECK(a == 0.5);
    CHECK(c.duration() == doctest::Approx(2.0));
    const auto s = PiecewiseControl::fourier({0.0, 0.0, 1.0}, 1.0, 4);
    CHECK(s.amplitudes()[0] == doctest::Approx(std::sin(2 * kPi * 0.125)));
    CHECK_THROWS_AS(PiecewiseControl::fourier({0.0, 1.0}, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(StateVector::from(Vector3C(1, 1, 0)), InvalidArgument);
}

TEST_CASE("bound search respects the budget and the kinematic bound") {
    const auto sys = SystemHamiltonians::standard();
    const auto r = coherent_bound_search(400, 3, sys);
    CHECK(r.evaluations == 400);
    CHECK(r.best <= 0.5 + 1e-9);
    CHECK(r.best >= dynamic_transition_probability(PiecewiseControl::zero(20, 48), std::nullopt,
                                                   PiecewiseControl::zero(20, 48), 2, sys));
    CHECK(r.coeffs.size() == 14);
    CHECK_THROWS_AS(coherent_bound_search(0, 1, sys), InvalidArgument);
}

TEST_CASE("anti-Zeno closed form") {
    CHECK(anti_zeno_pmax(1, kPi / 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(anti_zeno_pmax(1, kPi) == doctest::Approx(0.5).epsilon(1e-15));
    for (long n : {1L, 7L, 1000L}) CHECK(anti_zeno_pmax(n, 0.0) == 1.0);
    double prev = 0.0;
    for (long n = 1; n <= 200; ++n) {
        const double p = anti_zeno_pmax(n, kPi / 2);
        CHECK(p > prev);
        CHECK(p < 1.0);
        prev = p;
    }
    CHECK_THROWS_AS(anti_zeno_pmax(0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(anti_zeno_pmax(1, -0.1), InvalidArgument);
    CHECK_THROWS_AS(anti_zeno_pmax(1, 4.0), InvalidArgument);
}

TEST_CASE("anti-Zeno single measurement against brute force") {
    for (double dphi : {0.3, kPi / 2, 2.0, kPi}) {
        const double brute = oracle::two_level_single_measurement_max(dphi);
        CHECK(std::abs(anti_zeno_pmax(1, dphi) - brute) < 1e-6);
    }
}

}
