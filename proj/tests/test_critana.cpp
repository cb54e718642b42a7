#include <doctest.h>

#include <random>

#include "kinscape/critana.hpp"
#include "kinscape/error.hpp"
#include "kinscape/io.hpp"

using namespace kinscape;

namespace {

const double vmax = 3.0 / 50.0 * (9.0 + std::sqrt(6.0));

SearchConfig quick(int starts, int workers = 1) {
    SearchConfig c;
    c.starts = starts;
    c.workers = workers;
    return c;
}

}  // namespace

TEST_SUITE("critana") {

TEST_CASE("spectral classification") {
    const ClassifyContext ctx{1.0, 0.0, 1e-9};
    CHECK(classify(1.0, {-2.0, -1.0}, 1e-8, ctx) == Classification::GlobalMax);
    CHECK(classify(0.0, {0.5, 1.0}, 1e-8, ctx) == Classification::GlobalMin);
    CHECK(classify(0.3, {-1.0, 2.0}, 1e-8, ctx) == Classification::Saddle);
    CHECK(classify(0.3, {-1.0, -0.5}, 1e-8, ctx) == Classification::LocalMax);
    CHECK(classify(0.3, {0.2, 0.5}, 1e-8, ctx) == Classification::LocalMin);
    CHECK(classify(0.5, {-1.0, 0.0}, 1e-8, ctx) == Classification::SecondOrderTrap);
    CHECK(classify(0.5, {-1.0, 1e-9}, 1e-8, ctx) == Classification::SecondOrderTrap);
    CHECK(classify(0.5, {-1.0, 0.0}, 1e-8, ctx, ProbeStatus::QuadraticGrowth) == Classification::Degenerate);
    CHECK(classify(0.5, {-1.0, 0.0}, 1e-8, ctx, ProbeStatus::NoIncrease) == Classification::SecondOrderTrap);
    CHECK(classify(0.3, {0.0, 1.0}, 1e-8, ctx) == Classification::Degenerate);
    CHECK(parse_classification(to_string(Classification::SecondOrderTrap)) == Classification::SecondOrderTrap);
}

TEST_CASE("search configuration checks") {
    SearchConfig c;
    CHECK_NOTHROW(c.validate());
    c.starts = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = SearchConfig{};
    c.grad_tol = -1;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("L1 search recovers the eight tabulated points") {
    Chart l1;
    l1.kind = ChartKind::L1;
    SearchStats st;
    const auto recs = find_critical_points(l1, quick(2000, 0), &st);
    REQUIRE(recs.size() == 8);
    CHECK(recs[0].value == doctest::Approx(vmax).epsilon(1e-12));
    CHECK(recs[0].classification == Classification::GlobalMax);
    CHECK(recs[1].classification == Classification::GlobalMax);
    int saddles = 0;
    for (const auto& r : recs) {
        CHECK(r.grad_norm < 1e-10);
        saddles += r.classification == Classification::Saddle;
    }
    CHECK(saddles == 6);
    CHECK(recs.back().value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(st.converged + st.no_convergence + st.rejected_boundary == 2000);
}

TEST_CASE("results do not depend on the worker count") {
    Chart l1;
    l1.kind = ChartKind::L1;
    const auto a = find_critical_points(l1, quick(300, 1));
    const auto b = find_critical_points(l1, quick(300, 4));
    SearchStats s;
    CHECK(format_critical_report(l1.descriptor(), a, s) == format_critical_report(l1.descriptor(), b, s));
}

TEST_CASE("surface without critical points") {
    const Chart c = parse_chart("kind=full conv=zyz,yzy freeze=g1:0,a2:0,g2:0 surface=a2,g2");
    CHECK(find_critical_points(c, quick(300)).empty());
}

TEST_CASE("trap family on the YZY x ZYZ surface") {
    const Chart c = parse_chart("kind=full conv=yzy,zyz freeze=a1:0,g1:0,a2:0 surface=a1,g1");
    const auto recs = find_critical_points(c, quick(300));
    REQUIRE(recs.size() == 1);
    const auto& r = recs[0];
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.classification == Classification::SecondOrderTrap);
    CHECK(r.hessian_eigs.back() < 1e-8);
    CHECK(std::abs(r.hessian_eigs.back()) < 1e-8);
    REQUIRE(r.probe_status.has_value());
    CHECK(*r.probe_status != ProbeStatus::QuadraticGrowth);
    CHECK(r.family.find("b1=*") != std::string::npos);
}

TEST_CASE("probe separates quadratic growth from traps") {
    // a direction of positive curvature at a saddle must show quadratic growth
    Chart l1;
    l1.kind = ChartKind::L1;
    const Landscape land(l1);
    Eigen::VectorXd x(3);
    x << kPi / 2, kPi / 2, kPi / 2;
    Eigen::MatrixXd dirs = Eigen::MatrixXd::Zero(3, 1);
    const auto d = land.derivatives(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.hess);
    dirs.col(0) = es.eigenvectors().col(2);
    const ProbeResult p = null_direction_probe(land, x, dirs);
    CHECK(p.status == ProbeStatus::QuadraticGrowth);
    CHECK(p.order.value_or(0) == 2);
}

TEST_CASE("identity followed by a YZY factor on the a = g = 0 surface") {
    // D_YZY(0, b, 0) is a z-rotation, so with U(1) = I the population never
    // leaves level 1: the surface is a zero-valued family of minima.
    const Chart c = parse_chart("kind=full conv=zyz,yzy freeze=a1:0,b1:0,g1:0,a2:0,g2:0 surface=a2,g2");
    const Landscape land(c);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
        const double b = std::uniform_real_distribution<double>(0.05, kPi - 0.05)(rng);
        Eigen::VectorXd x = land.base();
        x(4) = b;
        const auto d = land.derivatives(x);
        CHECK(d.value == 0.0);
        CHECK(d.grad.norm() < 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.hess);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
}

TEST_CASE("table verification") {
    VerifyOptions o;
    const auto rows = verify_tables({"l1"}, o);
    CHECK(rows.size() == 8);
    for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.row);

    const auto one = verify_tables({"l1.max.pi"}, o);
    REQUIRE(one.size() == 1);
    CHECK(one[0].pass);
    CHECK(one[0].value == doctest::Approx(vmax).epsilon(1e-14));

    o.grad_tol = 1e-30;
    const auto strict = verify_tables({"l1.saddle.I.pi"}, o);
    REQUIRE(strict.size() == 1);
    CHECK_FALSE(strict[0].pass);
    CHECK_FALSE(strict[0].failures.empty());

    CHECK_THROWS_AS(verify_tables({"nope"}, VerifyOptions{}), InvalidArgument);
}

TEST_CASE("trap tables that reproduce") {
    for (const char* t : {"yzy-zyz", "yzy-yzy", "id-zyz"}) {
        const auto rows = verify_tables({t}, VerifyOptions{});
        CHECK(!rows.empty());
        for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.row);
    }
}

}
