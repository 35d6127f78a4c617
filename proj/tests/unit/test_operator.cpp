#include "flv/nlaplacian.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace flv;
using flv::test::vec;

namespace {

LiouvilleSolution euclid(int N) {
    return LiouvilleSolution(Gauge::euclidean(N), N, 1.0, Vec::Zero(N), ConvexCone::full_space(N));
}

std::vector<Vec> seeded_points(const LiouvilleSolution& s, int n, std::uint64_t seed) {
    std::vector<Vec> pts;
    Rng rng(seed);
    for (const Vec& w : interior_directions(s.cone(), n, 0.1, seed)) pts.push_back(s.x0() + std::exp(rng.uniform(std::log(0.2), std::log(10.0))) * w);
    return pts;
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("fd_grad examples") {
    const FDScheme s = FDScheme::with_step(1e-3);
    const Vec c = vec({1.5, -2.0, 0.25});
    Vec g = fd_grad([&](const Vec& x) { return c.dot(x); }, vec({0.3, 0.1, -4}), s);
    CHECK((g - c).norm() < 1e-9);
    g = fd_grad([](const Vec& x) { return 0.5 * x.squaredNorm(); }, vec({1, 2}), s);
    CHECK((g - vec({1, 2})).norm() < 1e-10);
    const auto sol = euclid(2);
    g = fd_grad([&](const Vec& x) { return solution_eval(sol, x); }, vec({1, 0}), FDScheme{1e-3, 1e-5, 2});
    CHECK(g(0) == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(std::abs(g(1)) < 1e-9);
}

TEST_CASE("scheme validation") {
    CHECK_THROWS_AS(validate(FDScheme{1e-3, 1e-2, 2}), InvalidArgument);
    CHECK_THROWS_AS(validate(FDScheme{1e-3, 1e-4, 3}), InvalidArgument);
    CHECK_THROWS_AS(validate(FDScheme{1e-14, 1e-15, 2}), InvalidArgument);
    CHECK_NOTHROW(validate(FDScheme::with_step(1e-3, 4)));
}

TEST_CASE("nlap_residual examples") {
    const FDScheme s = FDScheme::with_step(1e-3);
    CHECK(std::abs(nlap_residual(euclid(2), vec({0.5, 0}), s)) <= 1e-4);
    CHECK(std::abs(nlap_residual(euclid(3), vec({1, 0, 0}), s)) <= 1e-3);
}

TEST_CASE("nlap_residual placement and degeneracy guards") {
    const LiouvilleSolution half(Gauge::euclidean(2), 2, 1.0, vec({0, 0}), ConvexCone::half_space(2));
    CHECK_THROWS_AS(nlap_residual(half, vec({1.0, 1e-3}), FDScheme::with_step(1e-3)), PlacementError);
    ScalarField flat = [](const Vec&) { return 1.0; };
    CHECK_THROWS_AS(nlap_residual(Gauge::euclidean(2), 2, flat, vec({0.3, 0.2}), FDScheme::with_step(1e-3)), DegeneracyError);
}

TEST_CASE("linear field: residual is minus the density and the study rejects it") {
    const Gauge g = Gauge::euclidean(2);
    const Vec c = vec({0.3, -0.4});
    ScalarField u = [&](const Vec& x) { return c.dot(x); };
    const Vec x = vec({0.2, 0.7});
    CHECK(nlap_residual(g, 2, u, x, FDScheme::with_step(1e-3)) == doctest::Approx(-std::exp(u(x))).epsilon(1e-8));
    const auto study = convergence_study(g, 2, u, {x, vec({1, 1})}, {4e-3, 2e-3, 1e-3});
    CHECK_FALSE(study.accepted);
}

TEST_CASE("convergence is second order") {
    for (int N : {2, 3}) {
        const auto s = euclid(N);
        const auto study = convergence_study(s, seeded_points(s, 10, 5), {4e-3, 2e-3, 1e-3});
        CAPTURE(N);
        CHECK(study.fitted_order >= 1.5);
        CHECK(study.fitted_order <= 2.5);
        CHECK(study.accepted);
        REQUIRE(study.rows.size() == 3);
        CHECK(study.rows[2].max_residual < study.rows[0].max_residual);
        CHECK(std::isnan(study.rows[0].order));
    }
    CHECK_THROWS_AS(convergence_study(euclid(2), {vec({1, 0})}, {1e-3, 2e-3}), InvalidArgument);
}

TEST_CASE("property: interior residual small for every supported gauge") {
    const Mat A = flv::test::mat2(2, 0.3, 0.3, 1);
    for (const auto& s : {euclid(2), LiouvilleSolution(Gauge::ellipsoid(A), 2, 0.5, vec({0, 0}), ConvexCone::orthant(2, 2)),
                          LiouvilleSolution(Gauge::pnorm(2, 3), 2, 1.0, vec({1, 0}), ConvexCone::half_space(2))}) {
        const auto study = convergence_study(s, seeded_points(s, 10, 9), {4e-3, 2e-3, 1e-3});
        CHECK(study.rows.back().max_residual <= 1e-3);
        CHECK(study.accepted);
    }
}

TEST_CASE("neumann_flux examples") {
    CHECK(neumann_flux(euclid(2), 100, 1) == 0.0);
    const LiouvilleSolution half(Gauge::euclidean(2), 2, 1.0, vec({0.7, 0}), ConvexCone::half_space(2));
    CHECK(neumann_flux(half, 1000, 1) <= 1e-8);
    const auto bad = LiouvilleSolution::unchecked(Gauge::euclidean(2), 2, 1.0, vec({1, 0}), ConvexCone::orthant(2, 2));
    CHECK(neumann_flux(bad, 1000, 1) > 1e-2);
}

TEST_CASE("property: conormal flux vanishes for admissible anisotropic configurations") {
    const Mat A = flv::test::mat2(2, 0.3, 0.3, 1);
    const LiouvilleSolution q(Gauge::ellipsoid(A), 2, 0.5, vec({0, 0}), ConvexCone::orthant(2, 2));
    CHECK(neumann_flux(q, 1000, 4) <= 1e-8);
    Mat A3 = Mat::Identity(3, 3);
    A3(0, 2) = A3(2, 0) = 0.2;
    const LiouvilleSolution h(Gauge::ellipsoid(A3), 3, 1.0, vec({0.5, -0.25, 0}), ConvexCone::half_space(3));
    CHECK(neumann_flux(h, 1000, 4) <= 1e-8);
}

TEST_CASE("fd_grad matches solution_grad at a fine inner step") {
    const LiouvilleSolution s(Gauge::ellipsoid(flv::test::mat2(2, 0.3, 0.3, 1)), 2, 1.0, vec({0, 0}), ConvexCone::full_space(2));
    for (const Vec& x : seeded_points(s, 20, 13)) {
        const Vec fd = fd_grad([&](const Vec& y) { return solution_eval(s, y); }, x, FDScheme{1e-3, 1e-5, 2});
        const Vec g = solution_grad(s, x);
        CHECK((fd - g).norm() <= 1e-5 * g.norm());
    }
}

}
