#include "flv/verify.hpp"

#include "flv/cone.hpp"
#include "flv/dual.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace flv {

namespace {

double exponent_p(int N) { return static_cast<double>(N) / (N - 1); }

void require_line_factor(const LiouvilleSolution& sol, const char* what) {
    if (!sol.cone().in_line_factor(sol.x0())) {
        throw PlacementError(std::string(what) + ": the center must lie in R^k x {0}");
    }
}

// e^u at Hh0-distance r from the center.
double density_at(const LiouvilleSolution& sol, double r) {
    const int N = sol.N();
    return c_N(N) * std::pow(sol.lambda(), N) / std::pow(1.0 + std::pow(sol.lambda() * r, exponent_p(N)), N);
}

// Coordinates i with a facet normal -e_i, when every facet has that form; empty otherwise.
std::vector<int> orthant_axes(const ConvexCone& C) {
    std::vector<int> axes;
    for (int j = 0; j < C.facet_count(); ++j) {
        Vec n = C.full_normal(j);
        int i = 0;
        n.cwiseAbs().maxCoeff(&i);
        if (n[i] != -1.0 || std::abs(n.squaredNorm() - 1.0) > 0.0) return {};
        axes.push_back(i);
    }
    return axes;
}

enum CapSlot { kMass, kFlux, kCoarea, kDensityTerm, kPohozaev, kUnit, kSlots };

// One quadrature pass over ray directions collecting every integral over the cap
// C cap {Hh0(x - x0) < R} and its spherical boundary.
std::array<Estimate, kSlots> cap_pass(const LiouvilleSolution& sol, double R, const QuadratureSpec& quad) {
    require_line_factor(sol, "cap integrals");
    if (!(R > 0.0)) throw InvalidArgument("cap integrals: radius must be positive");
    const int N = sol.N();
    const Gauge& g = sol.gauge();
    const ConvexCone& C = sol.cone();
    auto integrand = [&](const Vec& w) {
        std::array<double, kSlots> v{};
        if (C.max_facet_value(w) >= 0.0) return v;
        DualEvaluation d = dual_hat_eval(g, w);
        const double h = d.value;
        const double rho = R / h;
        double err = 0.0;
        // Split at the profile scale s1. The core is rescaled to [0, 1] so the Kronrod error estimate
        // does not stall on tiny absolute values; the tail is integrated as is.
        const double s1 = std::min(rho, 1.0 / (sol.lambda() * h));
        v[kMass] = std::pow(s1, N) * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double tau) { return density_at(sol, tau * s1 * h) * std::pow(tau, N - 1); }, 0.0, 1.0, 15, 1e-13, &err);
        if (rho > s1)
            v[kMass] += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                [&](double s) { return density_at(sol, s * h) * std::pow(s, N - 1); }, s1, rho, 15, 1e-13, &err);
        v[kUnit] = std::pow(1.0 / h, N) / N;

        Vec gh = -*d.maximizer;
        const double gn = gh.norm();
        Vec nu = gh / gn;
        const double dS = std::pow(rho, N) * gn / R;
        Vec y = rho * w;
        Vec x = sol.x0() + y;
        Vec gu = solution_grad(sol, x);
        Vec a = a_field(g, N, gu);
        const double hg = g.value(gu);
        const double eu = density_at(sol, R);
        v[kFlux] = -a.dot(nu) * dS;
        v[kCoarea] = std::pow(hg, N) / gu.norm() * dS;
        v[kDensityTerm] = eu * y.dot(nu) * dS;
        v[kPohozaev] = (a.dot(nu) * y.dot(gu) - std::pow(hg, N) / N * y.dot(nu)) * dS;
        return v;
    };
    auto est = integrate_over_sphere<kSlots>(N, quad, integrand, C.circle_breaks());
    if (quad.method == QuadMethod::tensor_polar) {
        for (auto& e : est) e.err = std::max(e.err, kTensorErrFloor * std::abs(e.value));
    }
    return est;
}

}  // namespace

BalanceReport make_balance(double lhs, double rhs, double err, double rel_tol) {
    BalanceReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_gap = std::abs(lhs - rhs);
    r.rel_gap = r.abs_gap / std::max(std::abs(rhs), std::numeric_limits<double>::min());
    r.quadrature_err = err;
    r.tolerance = rel_tol * std::abs(rhs);
    r.pass = r.abs_gap <= std::max(r.tolerance, 3.0 * err);
    return r;
}

MassEstimate total_mass(const LiouvilleSolution& sol, const QuadratureSpec& quad) {
    require_line_factor(sol, "total_mass");
    validate(quad);
    const int N = sol.N();
    const double lam = sol.lambda();
    const double p = exponent_p(N);
    const double cn = c_N(N);
    MassEstimate out;
    out.unit_measure = wulff_cap_measure(WulffCap(sol.gauge(), 1.0, sol.x0(), sol.cone()), quad);
    const double unit = out.unit_measure.value;

    double rerr = 0.0;
    boost::math::quadrature::exp_sinh<double> es;
    double radial = es.integrate(
        [&](double r) { return std::pow(r, N - 1) * cn * std::pow(lam, N) / std::pow(1.0 + std::pow(lam * r, p), N); },
        1e-14, &rerr);
    out.semi_analytic = {N * unit * radial, N * radial * out.unit_measure.err + N * unit * rerr};

    // Direct estimator: uniform direction, then the Hh0-radius r = s Hh0(omega) drawn
    // with CDF (r / (a + r))^N, so the proposal does not depend on the direction.
    const double T = 1e3 / lam;
    const double a = 1.0 / lam;
    const double area = sphere_area(N);
    const ConvexCone& C = sol.cone();
    // Orthant-type cones are sampled exactly by folding signs; the solid-angle
    // fraction is then 2^-m. Other cones fall back to the indicator.
    const std::vector<int> fold = orthant_axes(C);
    const double dir_weight = fold.empty() ? area : std::ldexp(area, -static_cast<int>(fold.size()));
    // One dual solve per direction, shared by kRadialDraws radii; group means are the iid samples.
    constexpr int kRadialDraws = 2;
    const int groups = std::max(2, (quad.cross_check_samples + kRadialDraws - 1) / kRadialDraws);
    auto mc = monte_carlo<1>(groups, derive_seed(quad.seed, 0x7a55ULL), [&](Rng& rng) {
        std::array<double, 1> v{0.0};
        Vec w = rng.unit_vector(N);
        for (int i : fold) w[i] = std::abs(w[i]);
        double ts[kRadialDraws];
        for (double& t : ts) t = std::pow(rng.uniform(), 1.0 / N);
        if (fold.empty() && C.max_facet_value(w) >= 0.0) return v;
        const double hN = std::pow(dual_hat_eval(sol.gauge(), w).value, -N);
        for (double t : ts) {
            double r = a * t / (1.0 - t);
            if (r > T) continue;
            v[0] += dir_weight * hN * density_at(sol, r) * std::pow(a + r, N + 1) / (N * a);
        }
        v[0] /= kRadialDraws;
        return v;
    });
    out.truncation_radius = T;
    out.tail_bound = N * unit * cn * std::pow(lam, N - N * p) * std::pow(T, -N / (N - 1.0)) * (N - 1.0) / N;
    out.monte_carlo = {mc[0].value + out.tail_bound, mc[0].err};
    if (out.tail_bound > quad.target_rel_err * out.semi_analytic.value) {
        throw TruncationError("total_mass: analytic tail bound exceeds the target error");
    }
    return out;
}

MassQuantization mass_quantization_check(const LiouvilleSolution& sol, const QuadratureSpec& quad, double rel_tol) {
    MassQuantization out;
    out.mass = total_mass(sol, quad);
    const double cn = c_N(sol.N());
    const Estimate rhs{cn * out.mass.unit_measure.value, cn * out.mass.unit_measure.err};
    out.balance = make_balance(out.mass.semi_analytic.value, rhs.value, std::hypot(out.mass.semi_analytic.err, rhs.err), rel_tol);
    out.cross_check = make_balance(out.mass.monte_carlo.value, rhs.value, std::hypot(out.mass.monte_carlo.err, rhs.err), rel_tol);
    auto holds = [](const BalanceReport& b) { return b.lhs + 3.0 * b.quadrature_err >= b.rhs; };
    out.lower_bound_holds = holds(out.balance) && holds(out.cross_check);
    return out;
}

BalanceReport flux_mass_balance(const LiouvilleSolution& sol, double R, const QuadratureSpec& quad, double rel_tol) {
    auto est = cap_pass(sol, R, quad);
    return make_balance(est[kFlux].value, est[kMass].value, std::hypot(est[kFlux].err, est[kMass].err), rel_tol);
}

CoareaReport coarea_level_mass(const LiouvilleSolution& sol, double t, const QuadratureSpec& quad, double rel_tol) {
    CoareaReport out;
    out.radius = level_radius(sol, t);
    auto est = cap_pass(sol, out.radius, quad);
    out.balance = make_balance(est[kMass].value, est[kCoarea].value, std::hypot(est[kMass].err, est[kCoarea].err), rel_tol);
    out.closed_form = level_mass_closed_form(sol, t, est[kUnit].value);
    out.closed_form_rel_gap = std::abs(out.balance.lhs - out.closed_form) / out.closed_form;
    return out;
}

std::vector<LevelGeometryRow> level_geometry_check(const LiouvilleSolution& sol, const std::vector<double>& t_list,
                                                   const QuadratureSpec& quad) {
    require_line_factor(sol, "level_geometry_check");
    const int N = sol.N();
    const double unit = wulff_cap_measure(WulffCap(sol.gauge(), 1.0, sol.x0(), sol.cone()), quad).value;
    auto dirs = interior_directions(sol.cone(), 64, 1e-2, derive_seed(quad.seed, 0x1e7eULL));
    std::vector<LevelGeometryRow> rows;
    for (double t : t_list) {
        LevelGeometryRow row{};
        row.t = t;
        row.radius = level_radius(sol, t);
        row.radius_closed_form = level_radius_closed_form(sol, t);
        row.radius_rel_gap = std::abs(row.radius - row.radius_closed_form) / row.radius;
        double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin, hsum = 0.0;
        double gmin = hmin, gmax = -hmin, gsum = 0.0;
        for (const auto& w : dirs) {
            Vec x = sol.x0() + (row.radius / dual_hat_eval(sol.gauge(), w).value) * w;
            Vec gu = solution_grad(sol, x);
            double hg = sol.gauge().value(gu), gn = gu.norm();
            hmin = std::min(hmin, hg);
            hmax = std::max(hmax, hg);
            hsum += hg;
            gmin = std::min(gmin, gn);
            gmax = std::max(gmax, gn);
            gsum += gn;
        }
        const double m = static_cast<double>(dirs.size());
        row.h_grad_spread = (hmax - hmin) / (hsum / m);
        row.grad_norm_spread = (gmax - gmin) / (gsum / m);
        row.mass_closed_form = level_mass_closed_form(sol, t, unit);
        row.mass_from_gradient = N * std::pow(hsum / m, N - 1) * unit * std::pow(row.radius, N - 1);
        row.mass_rel_gap = std::abs(row.mass_from_gradient - row.mass_closed_form) / row.mass_closed_form;
        rows.push_back(row);
    }
    return rows;
}

PohozaevReport pohozaev_check(const LiouvilleSolution& sol, double R, const QuadratureSpec& quad, double rel_tol) {
    auto est = cap_pass(sol, R, quad);
    const int N = sol.N();
    PohozaevReport out;
    out.boundary_density_term = est[kDensityTerm];
    double lhs = N * est[kMass].value - est[kDensityTerm].value;
    double err = std::sqrt(std::pow(N * est[kMass].err, 2) + std::pow(est[kDensityTerm].err, 2) +
                           std::pow(est[kPohozaev].err, 2));
    out.balance = make_balance(lhs, est[kPohozaev].value, err, rel_tol);
    return out;
}

double boundary_term_decay_slope(const LiouvilleSolution& sol, const std::vector<double>& radii, const QuadratureSpec& quad) {
    if (radii.size() < 2) throw InvalidArgument("boundary_term_decay_slope: need at least two radii");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double R : radii) {
        double v = cap_pass(sol, R, quad)[kDensityTerm].value;
        if (!(v > 0.0)) {
            throw EvaluationError("boundary_term_decay_slope: boundary term " + std::to_string(v) + " at R=" +
                                  std::to_string(R) + " is not positive");
        }
        double X = std::log(R), Y = std::log(v);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double n = static_cast<double>(radii.size());
    return (sxy - sx * sy / n) / (sxx - sx * sx / n);
}

}  // namespace flv
