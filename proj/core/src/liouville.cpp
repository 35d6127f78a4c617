#include "flv/liouville.hpp"

#include "flv/dual.hpp"
#include "flv/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace flv {

namespace {

double exponent_p(int N) { return static_cast<double>(N) / (N - 1); }

void check_N(int N) {
    if (N < 2) throw InvalidArgument("N must be at least 2");
}

}  // namespace

double c_N(int N) {
    check_N(N);
    return N * std::pow(static_cast<double>(N) * N / (N - 1), N - 1);
}

LiouvilleSolution::LiouvilleSolution(Gauge g, int N, double lambda, Vec x0, ConvexCone cone)
    : LiouvilleSolution(std::move(g), N, lambda, std::move(x0), std::move(cone), true) {}

LiouvilleSolution LiouvilleSolution::unchecked(Gauge g, int N, double lambda, Vec x0, ConvexCone cone) {
    return LiouvilleSolution(std::move(g), N, lambda, std::move(x0), std::move(cone), false);
}

LiouvilleSolution::LiouvilleSolution(Gauge g, int N, double lambda, Vec x0, ConvexCone cone, bool check)
    : gauge_(std::move(g)), n_(N), lambda_(lambda), x0_(std::move(x0)), cone_(std::move(cone)), t0_(0.0) {
    check_N(N);
    if (gauge_.dim() != N || cone_.dim() != N) throw DimensionError("solution: gauge, cone and N must agree");
    require_dim(x0_, N, "solution center");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InvalidArgument("solution: lambda must be positive");
    if (!x0_.allFinite()) throw InvalidArgument("solution: center must be finite");
    if (check && !cone_.in_line_factor(x0_)) {
        throw PlacementError(cone_.k() == 0 ? "solution: a pointed cone requires the center at the vertex"
                                            : "solution: the center must lie in R^k x {0}");
    }
    t0_ = std::log(c_N(N)) + N * std::log(lambda_);
}

double solution_eval(const LiouvilleSolution& sol, const Vec& x) {
    require_dim(x, sol.N(), "solution_eval");
    const int N = sol.N();
    double rho = sol.lambda() * dual_hat_eval(sol.gauge(), Vec(x - sol.x0())).value;
    return sol.t0() - N * std::log1p(std::pow(rho, exponent_p(N)));
}

Vec solution_grad(const LiouvilleSolution& sol, const Vec& x) {
    require_dim(x, sol.N(), "solution_grad");
    const int N = sol.N();
    Vec y = x - sol.x0();
    if (y.isZero(0.0)) return Vec::Zero(N);
    DualEvaluation d = dual_hat_eval(sol.gauge(), y);
    if (d.ambiguous) throw AmbiguityError("solution_grad: dual maximizer is not unique");
    Vec grad_h0 = -*d.maximizer;
    const double p = exponent_p(N);
    const double rho = sol.lambda() * d.value;
    const double coef = -N * p * std::pow(rho, 1.0 / (N - 1)) * sol.lambda() / (1.0 + std::pow(rho, p));
    return coef * grad_h0;
}

double density_eval(const LiouvilleSolution& sol, const Vec& x) {
    require_dim(x, sol.N(), "density_eval");
    const int N = sol.N();
    double rho = sol.lambda() * dual_hat_eval(sol.gauge(), Vec(x - sol.x0())).value;
    return c_N(N) * std::pow(sol.lambda(), N) / std::pow(1.0 + std::pow(rho, exponent_p(N)), N);
}

double level_radius(const LiouvilleSolution& sol, double t) {
    if (!(t < sol.t0())) throw EmptyLevelError("level_radius: level at or above the peak value t0");
    const int N = sol.N();
    return std::pow(std::expm1((sol.t0() - t) / N), (N - 1.0) / N) / sol.lambda();
}

double level_radius_closed_form(const LiouvilleSolution& sol, double t) {
    if (!(t < sol.t0())) throw EmptyLevelError("level_radius_closed_form: level at or above the peak value t0");
    const int N = sol.N();
    const double t0 = sol.t0();
    double rn = c_N(N) * std::pow(-std::expm1((t - t0) / N), N - 1) * std::exp(-((N - 1) * t + t0) / N);
    return std::pow(rn, 1.0 / N);
}

double level_mass_closed_form(const LiouvilleSolution& sol, double t, double unit_cap_measure) {
    if (!(t < sol.t0())) throw EmptyLevelError("level_mass_closed_form: level at or above the peak value t0");
    if (!(unit_cap_measure > 0.0)) throw InvalidArgument("level_mass_closed_form: unit measure must be positive");
    const int N = sol.N();
    const double p = exponent_p(N);
    double B = p * std::pow(static_cast<double>(N), p) * std::pow(unit_cap_measure, 1.0 / (N - 1));
    return std::pow(B * -std::expm1((t - sol.t0()) / N), N - 1);
}

double level_mass_from_gradient(const LiouvilleSolution& sol, double t, double unit_cap_measure) {
    const int N = sol.N();
    double R = level_radius(sol, t);
    // Any point of the level set will do; take the first interior direction.
    Vec w = interior_directions(sol.cone(), 1, 1e-2, 7)[0];
    Vec x = sol.x0() + (R / dual_hat_eval(sol.gauge(), w).value) * w;
    double hg = sol.gauge().value(solution_grad(sol, x));
    return N * std::pow(hg, N - 1) * unit_cap_measure * std::pow(R, N - 1);
}

double beta_reference(int N) {
    check_N(N);
    return static_cast<double>(N) * N / (N - 1);
}

double beta0_from_mass(double mass, int N, double unit_cap_measure) {
    check_N(N);
    if (!(mass > 0.0) || !(unit_cap_measure > 0.0)) {
        throw InvalidArgument("beta0_from_mass: mass and unit measure must be positive");
    }
    return std::pow(mass / (N * unit_cap_measure), 1.0 / (N - 1));
}

std::vector<Vec> interior_directions(const ConvexCone& C, int count, double margin, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> out;
    for (int attempt = 0; attempt < 1000000 && static_cast<int>(out.size()) < count; ++attempt) {
        Vec w = rng.unit_vector(C.dim());
        if (C.max_facet_value(w) < -margin) out.push_back(w);
    }
    if (static_cast<int>(out.size()) < count) throw InvalidArgument("cone too narrow for the requested margin");
    return out;
}

AsymptoticReport asymptotic_checks(const LiouvilleSolution& sol, int ray_samples, std::pair<double, double> radius_range) {
    const auto [rmin, rmax] = radius_range;
    if (!(rmin >= 10.0) || !(rmax > rmin) || ray_samples < 3) {
        throw InvalidArgument("asymptotic_checks: need 10 <= rmin < rmax and at least 3 samples per ray");
    }
    const int N = sol.N();
    const double beta = beta_reference(N);
    constexpr int kRays = 8;
    auto dirs = interior_directions(sol.cone(), kRays, 1e-2, 0xa5f1ULL);

    AsymptoticReport rep;
    rep.beta_ref = beta;
    rep.rays = kRays;
    std::vector<double> radii(static_cast<std::size_t>(ray_samples));
    for (int i = 0; i < ray_samples; ++i) {
        radii[static_cast<std::size_t>(i)] = rmin * std::pow(rmax / rmin, static_cast<double>(i) / (ray_samples - 1));
    }
    const std::array<double, 3> shell_r{rmin, std::sqrt(rmin * rmax), rmax};
    std::array<double, 3> shell_max{0.0, 0.0, 0.0};

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    double inner_max = -std::numeric_limits<double>::infinity(), outer_max = inner_max;
    double cmax = -std::numeric_limits<double>::infinity();
    double L = 1.0;
    std::vector<double> local(radii.size() - 1, 0.0);
    long n = 0;

    auto decay = [&](const Vec& x) {
        Vec y = x - sol.x0();
        DualEvaluation d = dual_hat_eval(sol.gauge(), y);
        Vec corr = solution_grad(sol, x) + beta * (-*d.maximizer) / d.value;
        return x.norm() * corr.norm();
    };

    for (const auto& w : dirs) {
        const double hw = dual_hat_eval(sol.gauge(), w).value;
        double prev_u = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const double r = radii[i];
            Vec x = sol.x0() + (r / hw) * w;
            double u = solution_eval(sol, x);
            if (!std::isfinite(u) || !x.allFinite()) throw EvaluationError("asymptotic_checks: ray left the floating-point range");
            double X = -std::log(r);
            sx += X;
            sy += u;
            sxx += X * X;
            sxy += X * u;
            ++n;
            double v = u + beta * std::log(r);
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
            double xn = x.norm();
            double c = u + N * std::log(xn);
            cmax = std::max(cmax, c);
            double& half = 2 * i < radii.size() ? inner_max : outer_max;
            half = std::max(half, c);
            double uh = sol.t0() - u;
            double lx = std::log(xn);
            if (lx > 0 && uh > 0) L = std::max({L, uh / lx, lx / uh});
            if (i > 0) local[i - 1] += (prev_u - u) / std::log(r / radii[i - 1]) / kRays;
            prev_u = u;
        }
        for (int s = 0; s < 3; ++s) {
            shell_max[static_cast<std::size_t>(s)] =
                std::max(shell_max[static_cast<std::size_t>(s)], decay(Vec(sol.x0() + (shell_r[static_cast<std::size_t>(s)] / hw) * w)));
        }
    }
    const double dn = static_cast<double>(n);
    rep.beta_est = (sxy - sx * sy / dn) / (sxx - sx * sx / dn);
    rep.beta_err = std::abs(rep.beta_est - beta);
    rep.variation = vmax - vmin;
    rep.C_est = cmax;
    rep.upper_bound_holds = outer_max <= inner_max + 1e-12;
    rep.L_est = L;
    for (int s = 0; s < 3; ++s) rep.shells.push_back({shell_r[static_cast<std::size_t>(s)], shell_max[static_cast<std::size_t>(s)]});
    rep.decay_decreasing = shell_max[1] < shell_max[0] && shell_max[2] < shell_max[1];
    for (std::size_t i = 0; i < local.size(); ++i) rep.local_beta.emplace_back(std::sqrt(radii[i] * radii[i + 1]), local[i]);
    return rep;
}

}  // namespace flv
