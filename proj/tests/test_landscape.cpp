#include <doctest.h>

#include <random>

#include "kinscape/error.hpp"
#include "kinscape/landscape.hpp"
#include "oracles.hpp"

using namespace kinscape;

namespace {

double uni(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Chart full(Convention c1, Convention c2, int measured, int target) {
    Chart c;
    c.conv1 = c1;
    c.conv2 = c2;
    c.measured = measured;
    c.target = target;
    return c;
}

const double s6 = std::sqrt(6.0);
const double vmax = 3.0 / 50.0 * (9.0 + s6);
const double vsad = 3.0 / 50.0 * (9.0 - s6);

}  // namespace

TEST_SUITE("landscape") {

TEST_CASE("full chart equals the superoperator oracle") {
    std::mt19937_64 rng(21);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double a1 = uni(rng, -kPi, kPi), b1 = uni(rng, 0, kPi), g1 = uni(rng, -kPi, kPi);
        const double a2 = uni(rng, -kPi, kPi), b2 = uni(rng, 0, kPi), g2 = uni(rng, -kPi, kPi);
        for (int m = 0; m <= 3; ++m) {
            const int t = 1 + i % 3;
            const double v = chart_eval(full(Convention::ZYZ, Convention::YZY, m, t), {a1, b1, g1, a2, b2, g2});
            const double ref = oracle::channel_probability(oracle::zyz(a1, b1, g1), m, oracle::yzy(a2, b2, g2), t);
            worst = std::max(worst, std::abs(v - ref));
        }
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("reduced forms follow from the full chart") {
    std::mt19937_64 rng(22);
    double w1 = 0.0, wm = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double a1 = uni(rng, -kPi, kPi), b1 = uni(rng, 0, kPi), g1 = uni(rng, -kPi, kPi);
        const double a2 = uni(rng, -kPi, kPi), b2 = uni(rng, 0, kPi), g2 = uni(rng, -kPi, kPi);
        const std::vector<double> x{a1, b1, g1, a2, b2, g2};
        w1 = std::max(w1, std::abs(chart_eval(full(Convention::ZYZ, Convention::ZYZ, 1, 2), x) - l1({a1 + g2, b1, b2})));
        const double ref = oracle::channel_probability(oracle::zyz(a1, b1, g1), 2, oracle::zyz(a2, b2, g2), 2);
        wm = std::max(wm, std::abs(ref - m_landscape({a1 + g2, b1, b2})));
    }
    CHECK(w1 < 1e-13);
    CHECK(wm < 1e-13);
}

TEST_CASE("envelope is the supremum over the phase") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const double b1 = uni(rng, 0, kPi), b2 = uni(rng, 0, kPi);
        double scan = 0.0;
        for (int k = 0; k < 720; ++k) scan = std::max(scan, m_landscape({-kPi + k * kPi / 360, b1, b2}));
        CHECK(m_func(b1, b2) >= scan - 1e-15);
        CHECK(m_func(b1, b2) == doctest::Approx(m_landscape({kPi / 2, b1, b2})).epsilon(1e-14));
        CHECK(m_func(b1, b2) <= 0.5 + 1e-15);
    }
}

TEST_CASE("tabulated L1 values") {
    const double b1_1 = std::acos((1 + s6) / 5), b2_1 = 0.5 * std::acos(1 / (1 - s6));
    const double b1_2 = std::acos((1 - s6) / 5), b2_2 = 0.5 * std::acos(1 / (1 + s6));
    const double b1_3 = std::acos((std::sqrt(5.0) - 1) / 2), b2_3 = 0.5 * std::atan(2 * std::sqrt(2 + std::sqrt(5.0)));
    CHECK(l1({kPi, b1_2, b2_2}) == doctest::Approx(vmax).epsilon(1e-14));
    CHECK(l1({0.0, b1_2, kPi - b2_2}) == doctest::Approx(vmax).epsilon(1e-14));
    CHECK(l1({kPi, b1_1, b2_1}) == doctest::Approx(vsad).epsilon(1e-14));
    CHECK(l1({kPi, b1_3, kPi - b2_3}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(l1({0.0, b1_3, b2_3}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(l1({kPi / 2, kPi / 2, kPi / 2}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(l1_grad({kPi, b1_2, b2_2}).norm() < 1e-14);
}

TEST_CASE("analytic L1 derivatives against finite differences") {
    std::mt19937_64 rng(24);
    const oracle::Fn f = [](const Eigen::VectorXd& x) { return l1({x(0), x(1), x(2)}); };
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x(3);
        x << uni(rng, -kPi, kPi), uni(rng, 0.05, kPi - 0.05), uni(rng, 0.05, kPi - 0.05);
        const ReducedPoint p{x(0), x(1), x(2)};
        CHECK((l1_grad(p) - oracle::fd_grad(f, x)).norm() < 1e-9);
        CHECK((l1_hessian(p) - oracle::fd_hessian(f, x)).norm() < 1e-7);
    }
}

TEST_CASE("automatic derivatives on mixed charts") {
    std::mt19937_64 rng(25);
    for (auto [c1, c2] : {std::pair{Convention::ZYZ, Convention::ZYZ}, std::pair{Convention::YZY, Convention::ZYZ},
                          std::pair{Convention::ZYZ, Convention::YZY}}) {
        for (int m = 0; m <= 3; ++m) {
            const Landscape land(full(c1, c2, m, 2));
            Eigen::VectorXd x(6);
            x << uni(rng, -3, 3), uni(rng, 0.2, 2.9), uni(rng, -3, 3), uni(rng, -3, 3), uni(rng, 0.2, 2.9), uni(rng, -3, 3);
            const auto d = land.derivatives(x);
            const oracle::Fn f = [&](const Eigen::VectorXd& y) { return land.value(y); };
            CHECK(d.value == doctest::Approx(land.value(x)).epsilon(1e-15));
            CHECK((d.grad - oracle::fd_grad(f, x)).norm() < 1e-9);
            CHECK((d.hess - oracle::fd_hessian(f, x)).norm() < 1e-7);
        }
    }
}

TEST_CASE("library finite differences near a bound") {
    const ScalarFn f = [](const Eigen::VectorXd& x) { return l1({x(0), x(1), x(2)}); };
    Eigen::VectorXd x(3);
    x << 0.4, 1e-5, 1.0;
    Box box{Eigen::Vector3d(-kPi, 0, 0), Eigen::Vector3d(kPi, kPi, kPi)};
    const ReducedPoint p{x(0), x(1), x(2)};
    CHECK((numeric_grad(f, x, 1e-5, &box) - l1_grad(p)).norm() < 1e-6);
    x(1) = 1.3;
    CHECK((numeric_hessian(f, x) - l1_hessian({x(0), x(1), x(2)})).norm() < 1e-5);
}

TEST_CASE("P(1->3) objective") {
    const P13Maximum m = maximize_p13();
    CHECK(std::abs(m.value - 1.0) < 1e-12);
    CHECK(std::abs(m.beta1 - kPi) < 1e-6);
    // the same maximum on the full chart, for either measured state
    for (int meas : {1, 2})
        CHECK(std::abs(chart_eval(full(Convention::ZYZ, Convention::ZYZ, meas, 3), {0, kPi, 0, 0, 0, 0}) - 1.0) < 1e-14);
}

TEST_CASE("chart validation and embedding") {
    Chart c;
    c.kind = ChartKind::L1;
    c.measured = 2;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.measured = 1;
    CHECK_NOTHROW(c.validate());
    c.frozen["q"] = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.frozen.clear();
    c.frozen["o"] = 0.0;
    CHECK(c.free() == std::vector<std::string>{"b1", "b2"});
    CHECK_THROWS_AS(c.embed({4.0, 1.0}), OutOfRange);
    const Eigen::VectorXd e = c.embed({1.0, 2.0});
    CHECK(e(0) == 0.0);
    CHECK(e(2) == 2.0);

    Chart f;
    f.frozen["a1"] = 0.0;
    f.surface.insert("a1");
    CHECK(f.stationary().size() == 6);
    CHECK(f.free().size() == 5);
    f.target = 0;
    CHECK_THROWS_AS(f.validate(), InvalidArgument);
}

}
