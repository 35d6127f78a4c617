#include "flv/verify.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace flv;
using flv::test::vec;
using std::numbers::pi;

namespace {

LiouvilleSolution sol2(ConvexCone C, double lambda = 1.0, Gauge g = Gauge::euclidean(2)) {
    return LiouvilleSolution(std::move(g), 2, lambda, Vec::Zero(2), std::move(C));
}

QuadratureSpec quad(std::uint64_t seed = 1) {
    QuadratureSpec q;
    q.seed = seed;
    return q;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("make_balance") {
    auto b = make_balance(10.0, 10.04, 0.0, 5e-3);
    CHECK(b.tolerance == doctest::Approx(0.0502));
    CHECK(b.pass);
    b = make_balance(10.0, 10.1, 0.0, 5e-3);
    CHECK_FALSE(b.pass);
    // tolerance may not undercut the estimator
    b = make_balance(10.0, 10.1, 0.04, 5e-3);
    CHECK(b.pass);
    CHECK(b.rel_gap == doctest::Approx(0.1 / 10.1));
}

TEST_CASE("total_mass examples") {
    auto m = total_mass(sol2(ConvexCone::full_space(2)), quad());
    CHECK(m.semi_analytic.value == doctest::Approx(oracle::kMassN2Plane).epsilon(1e-6));
    CHECK(std::abs(m.monte_carlo.value - oracle::kMassN2Plane) <= 3 * m.monte_carlo.err + 1e-2 * oracle::kMassN2Plane);
    CHECK(m.truncation_radius == doctest::Approx(1e3));
    m = total_mass(sol2(ConvexCone::orthant(2, 2)), quad());
    CHECK(m.semi_analytic.value == doctest::Approx(oracle::kMassN2Quadrant).epsilon(1e-6));
    m = total_mass(sol2(ConvexCone::full_space(2), 7.0), quad());
    CHECK(m.semi_analytic.value == doctest::Approx(oracle::kMassN2Lambda7).epsilon(1e-6));
    CHECK(m.truncation_radius == doctest::Approx(1e3 / 7.0));
}

TEST_CASE("mass_quantization_check examples") {
    auto r = mass_quantization_check(sol2(ConvexCone::full_space(2)), quad());
    CHECK(r.balance.pass);
    CHECK(r.balance.abs_gap <= 5e-3 * 8 * pi);
    CHECK(r.lower_bound_holds);
    const LiouvilleSolution s3(Gauge::euclidean(3), 3, 1.0, Vec::Zero(3), ConvexCone::full_space(3));
    r = mass_quantization_check(s3, quad());
    CHECK(r.balance.lhs == doctest::Approx(oracle::kMassN3Space).epsilon(1e-5));
    CHECK(r.balance.rhs == doctest::Approx(oracle::kCN3 * oracle::kUnitBall3).epsilon(1e-8));
    CHECK(r.balance.pass);
    const auto aniso = sol2(ConvexCone::half_space(2), 1.0, Gauge::ellipsoid(flv::test::mat2(2, 0.3, 0.3, 1)));
    r = mass_quantization_check(aniso, quad());
    CHECK(r.balance.pass);
    CHECK(r.cross_check.abs_gap <= std::max(5e-3 * r.cross_check.rhs, 3 * r.cross_check.quadrature_err));
    CHECK(r.balance.rhs == doctest::Approx(oracle::kCN2 * oracle::kEllipsoid2Unit / 2).epsilon(1e-6));
}

TEST_CASE("property: mass is invariant under scale and admissible center") {
    const Gauge g = Gauge::ellipsoid(flv::test::mat2(2, 0.3, 0.3, 1));
    const auto ref = total_mass(sol2(ConvexCone::half_space(2), 1.0, g), quad());
    for (double lambda : {0.5, 3.0}) {
        const auto m = total_mass(sol2(ConvexCone::half_space(2), lambda, g), quad());
        CHECK(std::abs(m.semi_analytic.value - ref.semi_analytic.value) <= 3 * std::hypot(m.semi_analytic.err, ref.semi_analytic.err) + 1e-12);
    }
    const LiouvilleSolution moved(g, 2, 1.0, vec({2.5, 0}), ConvexCone::half_space(2));
    const auto m = total_mass(moved, quad());
    CHECK(std::abs(m.monte_carlo.value - ref.monte_carlo.value) <= 3 * std::hypot(m.monte_carlo.err, ref.monte_carlo.err));
}

TEST_CASE("Monte Carlo error shrinks like one over root budget") {
    auto q = quad(5);
    q.cross_check_samples = 50000;
    const auto s = sol2(ConvexCone::full_space(2), 1.0, Gauge::ellipsoid(flv::test::mat2(2, 0.3, 0.3, 1)));
    const double e1 = total_mass(s, q).monte_carlo.err;
    q.cross_check_samples = 100000;
    const double e2 = total_mass(s, q).monte_carlo.err;
    CHECK(e1 / e2 >= 1.2);
    CHECK(e1 / e2 <= 1.7);
}

TEST_CASE("same seed gives the same estimate") {
    const auto s = sol2(ConvexCone::orthant(2, 2));
    const auto a = total_mass(s, quad(9));
    const auto b = total_mass(s, quad(9));
    CHECK(a.monte_carlo.value == b.monte_carlo.value);
    CHECK(a.semi_analytic.value == b.semi_analytic.value);
}

TEST_CASE("flux_mass_balance examples") {
    const auto s = sol2(ConvexCone::full_space(2));
    auto b = flux_mass_balance(s, 1.0, quad());
    CHECK(b.lhs == doctest::Approx(oracle::kFluxN2R1).epsilon(1e-8));
    CHECK(b.rhs == doctest::Approx(oracle::kFluxN2R1).epsilon(1e-8));
    CHECK(b.pass);
    b = flux_mass_balance(s, 0.1, quad());
    CHECK(b.lhs == doctest::Approx(oracle::kFluxN2R01).epsilon(1e-8));
    CHECK(b.rhs == doctest::Approx(oracle::kFluxN2R01).epsilon(1e-8));
    b = flux_mass_balance(s, 10.0, quad());
    CHECK(b.rhs == doctest::Approx(oracle::kFluxN2R10).epsilon(1e-8));
    b = flux_mass_balance(s, 1e4, quad());
    CHECK(b.lhs == doctest::Approx(oracle::kMassN2Plane).epsilon(1e-6));
}

TEST_CASE("property: flux balance on anisotropic cones") {
    const Mat A = flv::test::mat2(2, 0.3, 0.3, 1);
    for (const auto& s : {sol2(ConvexCone::orthant(2, 2), 0.5, Gauge::ellipsoid(A)),
                          sol2(ConvexCone::half_space(2), 1.0, Gauge::drifted(vec({0.3, -0.2})))}) {
        for (double R : {0.1, 1.0, 10.0}) CHECK(flux_mass_balance(s, R, quad()).pass);
    }
}

TEST_CASE("coarea_level_mass examples") {
    const auto s = sol2(ConvexCone::full_space(2));
    const auto r = coarea_level_mass(s, std::log(2.0), quad());
    CHECK(r.radius == doctest::Approx(1.0));
    CHECK(r.balance.lhs == doctest::Approx(4 * pi).epsilon(1e-8));
    CHECK(r.balance.rhs == doctest::Approx(4 * pi).epsilon(1e-8));
    CHECK(r.closed_form == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(r.closed_form_rel_gap <= 1e-3);
    CHECK_THROWS_AS(coarea_level_mass(s, s.t0() + 0.1, quad()), EmptyLevelError);
    // very low levels approach the total mass
    const auto low = coarea_level_mass(s, -25.0, quad());
    CHECK(low.closed_form == doctest::Approx(8 * pi).epsilon(1e-3));
}

TEST_CASE("level mass decreases to zero at the peak") {
    const auto s = sol2(ConvexCone::orthant(2, 2), 0.5, Gauge::ellipsoid(flv::test::mat2(2, 0.3, 0.3, 1)));
    const double unit = oracle::kEllipsoid2QuadrantUnit;
    double prev = INFINITY;
    for (double d = 6.0; d > 1e-3; d *= 0.7) {
        const double m = level_mass_closed_form(s, s.t0() - d, unit);
        CHECK(m < prev);
        prev = m;
    }
    // M -> 0 at the peak, measured against the total mass c_N |C cap B_1|
    const double total = c_N(2) * unit;
    CHECK(level_mass_closed_form(s, s.t0() - 1e-3, unit) <= 1e-3 * total);
    CHECK(level_mass_closed_form(s, s.t0() - 1e-9, unit) <= 1e-9 * total);
    CHECK(level_mass_closed_form(s, -60.0, unit) == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("level_geometry_check examples") {
    const auto s = sol2(ConvexCone::full_space(2));
    const auto rows = level_geometry_check(s, {std::log(2.0)}, quad());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].radius == doctest::Approx(1.0));
    CHECK(rows[0].radius_closed_form == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[0].h_grad_spread <= 1e-8);
    CHECK(rows[0].mass_rel_gap <= 1e-3);
    // H(grad u) = |grad u| = 2 on the unit circle
    CHECK(solution_grad(s, vec({0, 1})).norm() == doctest::Approx(2.0));

    const auto aniso = sol2(ConvexCone::orthant(2, 2), 0.5, Gauge::ellipsoid(flv::test::mat2(2, 0.3, 0.3, 1)));
    for (const auto& r : level_geometry_check(aniso, {aniso.t0() - 0.5, aniso.t0() - 3.0}, quad())) {
        CHECK(r.h_grad_spread <= 1e-8);
        CHECK(r.grad_norm_spread > 1e-2);
        CHECK(r.radius_rel_gap <= 1e-3);
        CHECK(r.mass_rel_gap <= 1e-3);
    }
}

TEST_CASE("pohozaev_check examples") {
    const auto s = sol2(ConvexCone::full_space(2));
    auto r = pohozaev_check(s, 1.0, quad());
    CHECK(r.balance.lhs == doctest::Approx(oracle::kPohozaevN2R1Lhs).epsilon(1e-8));
    CHECK(r.balance.rhs == doctest::Approx(oracle::kPohozaevN2R1Rhs).epsilon(1e-8));
    CHECK(r.balance.pass);
    const LiouvilleSolution s3(Gauge::euclidean(3), 3, 1.0, Vec::Zero(3), ConvexCone::full_space(3));
    r = pohozaev_check(s3, 1.0, quad());
    CHECK(r.balance.lhs == doctest::Approx(oracle::kPohozaevN3R1Lhs).epsilon(1e-6));
    CHECK(r.balance.rhs == doctest::Approx(oracle::kPohozaevN3R1Rhs).epsilon(1e-6));
    const auto tiny = pohozaev_check(s, 1e-4, quad());
    CHECK(std::abs(tiny.balance.lhs) < 1e-6);
    CHECK(std::abs(tiny.balance.rhs) < 1e-6);
}

TEST_CASE("boundary density term decays at the predicted rate") {
    const double slope = boundary_term_decay_slope(sol2(ConvexCone::full_space(2)), {10, 30, 100}, quad());
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.3 / 2.0));
}

}
