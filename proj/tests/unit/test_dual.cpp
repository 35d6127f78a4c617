#include "flv/dual.hpp"
#include "flv/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace flv;
using flv::test::diag;
using flv::test::vec;

namespace {

Mat random_spd(int N, Rng& rng) {
    Mat B(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) B(i, j) = rng.uniform(-1, 1);
    return B * B.transpose() + 0.5 * Mat::Identity(N, N);
}

}  // namespace

TEST_SUITE("dual") {

TEST_CASE("dual_eval examples") {
    CHECK(dual_eval(Gauge::euclidean(2), vec({3, 4})).value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(dual_eval(Gauge::pnorm(2, 4), vec({1, 1})).value == doctest::Approx(oracle::kPNorm4DualAt11).epsilon(1e-10));
    CHECK(dual_eval(Gauge::ellipsoid(diag({1, 4})), vec({0, 2})).value ==
          doctest::Approx(oracle::kEllipseDiag14DualAt02).epsilon(1e-10));
}

TEST_CASE("dual at the origin has no maximizer") {
    const auto d = dual_eval(Gauge::pnorm(3, 3), Vec::Zero(3));
    CHECK(d.value == 0.0);
    CHECK_FALSE(d.maximizer.has_value());
    CHECK(dual_hat_eval(Gauge::drifted(vec({0.2, 0.1})), Vec::Zero(2)).value == 0.0);
}

TEST_CASE("dual_hat_eval examples") {
    CHECK(dual_hat_eval(Gauge::euclidean(2), vec({3, 4})).value == doctest::Approx(5.0).epsilon(1e-12));
    const Gauge g = Gauge::drifted(vec({0.5, 0}));
    const double plus = dual_hat_eval(g, vec({1, 0})).value;
    const double minus = dual_hat_eval(g, vec({-1, 0})).value;
    CHECK(plus == doctest::Approx(oracle::kDriftedDualHatPlusX).epsilon(1e-9));
    CHECK(minus == doctest::Approx(oracle::kDriftedDualHatMinusX).epsilon(1e-9));
    CHECK(std::abs(plus - minus) > 1.0);
}

TEST_CASE("dual_grad examples") {
    Vec g = dual_grad(Gauge::euclidean(2), vec({0, 5}));
    CHECK(g(0) == doctest::Approx(0.0));
    CHECK(g(1) == doctest::Approx(1.0));
    const Gauge e = Gauge::ellipsoid(diag({1, 4}));
    g = dual_grad(e, vec({0, 2}));
    CHECK(g(1) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(g(0)) < 1e-8);
    CHECK(e.value(g) == doctest::Approx(1.0).epsilon(1e-10));
    const Gauge eu = Gauge::euclidean(2);
    const Vec x = vec({3, 4});
    const Vec rec = dual_eval(eu, x).value * grad_gauge(eu, dual_grad(eu, x));
    CHECK((rec - x).norm() < 1e-10);
    CHECK_THROWS_AS(dual_grad(eu, vec({0, 0})), SingularPointError);
}

TEST_CASE("closed_form_dual examples") {
    auto d = closed_form_dual(Gauge::pnorm(2, 4));
    REQUIRE(d.has_value());
    REQUIRE(d->kind() == GaugeKind::pnorm);
    CHECK(std::get<PNorm>(d->family()).q == doctest::Approx(4.0 / 3.0));
    d = closed_form_dual(Gauge::ellipsoid(diag({1, 4})));
    REQUIRE(d.has_value());
    const Mat& Ai = std::get<Ellipsoid>(d->family()).A;
    CHECK(Ai(0, 0) == doctest::Approx(1.0));
    CHECK(Ai(1, 1) == doctest::Approx(0.25));
    CHECK(closed_form_dual(Gauge::euclidean(3))->kind() == GaugeKind::euclidean);
    CHECK_FALSE(closed_form_dual(Gauge::drifted(vec({0.1, 0.1}))).has_value());
    Mat M(2, 2);
    M << 1, 0.5, 0, 2;
    d = closed_form_dual(Gauge::linear_image(M, 3));
    REQUIRE(d.has_value());
    const auto& li = std::get<LinearImage>(d->family());
    CHECK(li.q == doctest::Approx(1.5));
    CHECK((li.M - M.inverse().transpose()).norm() < 1e-14);
}

TEST_CASE("property: dual matches closed forms on seeded points") {
    Rng rng(2024);
    for (int N : {2, 3}) {
        std::vector<Gauge> gs{Gauge::euclidean(N), Gauge::pnorm(N, 1.5), Gauge::pnorm(N, 3), Gauge::pnorm(N, 4),
                              Gauge::ellipsoid(random_spd(N, rng))};
        for (const auto& g : gs) {
            CAPTURE(g.name());
            const Gauge cf = *closed_form_dual(g);
            for (int i = 0; i < 100; ++i) {
                const Vec x = rng.normal_vector(N) * std::exp(rng.uniform(-2, 2));
                const double v = dual_eval(g, x).value;
                CHECK(std::abs(v - cf.value(x)) <= 1e-6 * (1 + v));
            }
        }
    }
}

TEST_CASE("property: duality identities, reconstruction, homogeneity and sandwich") {
    for (int N : {2, 3}) {
        Mat A = Mat::Identity(N, N);
        A(0, 0) = 3.0;
        A(0, 1) = A(1, 0) = -0.4;
        Vec b = Vec::Zero(N);
        b(0) = -0.35;
        b(N - 1) = 0.2;
        for (const auto& g : {Gauge::pnorm(N, 3), Gauge::ellipsoid(A), Gauge::drifted(b)}) {
            CAPTURE(g.name());
            const auto ext = sphere_extrema(g, 20000);
            Rng rng(derive_seed(31, N));
            for (int i = 0; i < 60; ++i) {
                const Vec x = rng.normal_vector(N);
                const auto d = dual_eval(g, x);
                REQUIRE(d.maximizer.has_value());
                CHECK(g.value(*d.maximizer) == doctest::Approx(1.0).epsilon(1e-8));
                CHECK(std::abs(d.value - x.dot(*d.maximizer)) <= 1e-10 * (1 + d.value));
                const Vec gd = dual_grad(g, x);
                CHECK(std::abs(g.value(gd) - 1.0) <= 1e-6);
                CHECK((x - d.value * grad_gauge(g, gd)).norm() <= 1e-6 * x.norm());

                const Vec xi = rng.normal_vector(N);
                const Vec gh = grad_gauge(g, xi);
                CHECK(std::abs(dual_eval(g, gh).value - 1.0) <= 1e-6);
                CHECK((xi - g.value(xi) * dual_grad(g, gh)).norm() <= 1e-6 * xi.norm());

                for (double s : {0.5, 2.0}) CHECK(std::abs(dual_eval(g, s * x).value - s * d.value) <= 1e-10 * s * d.value);

                const double r = x.norm();
                for (double v : {d.value, dual_hat_eval(g, x).value}) {
                    CHECK(r / ext.C_H <= v * (1 + 1e-6));
                    CHECK(v <= r / ext.c_H * (1 + 1e-6));
                }
            }
        }
    }
}

TEST_CASE("dual_hat_grad is the gradient of x -> H_0(-x)") {
    const Gauge g = Gauge::drifted(vec({0.4, -0.1}));
    const Vec x = vec({0.3, 0.9});
    const double h = 1e-6;
    Vec fd(2);
    for (int i = 0; i < 2; ++i) {
        Vec p = x, m = x;
        p(i) += h;
        m(i) -= h;
        fd(i) = (dual_hat_eval(g, p).value - dual_hat_eval(g, m).value) / (2 * h);
    }
    CHECK((dual_hat_grad(g, x) - fd).norm() < 1e-6);
}

}
