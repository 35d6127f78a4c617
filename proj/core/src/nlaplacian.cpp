#include "flv/nlaplacian.hpp"

#include "flv/dual.hpp"
#include "flv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flv {

namespace {

double eval_checked(const ScalarField& u, const Vec& x) {
    double v = u(x);
    if (!std::isfinite(v)) throw EvaluationError("finite differences: field is not finite at a stencil point");
    return v;
}

ConvergenceStudy study(const std::vector<double>& h_list, const std::function<double(double)>& max_residual) {
    if (h_list.size() < 3) throw InvalidArgument("convergence_study: need at least three step sizes");
    for (std::size_t i = 1; i < h_list.size(); ++i) {
        double r = h_list[i - 1] / h_list[i];
        double r0 = h_list[0] / h_list[1];
        if (!(h_list[i] > 0.0) || std::abs(r - r0) > 1e-9 * r0) {
            throw InvalidArgument("convergence_study: step sizes must form a geometric sequence");
        }
    }
    ConvergenceStudy out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        double h = h_list[i];
        double r = max_residual(h);
        double order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0) order = std::log(out.rows.back().max_residual / r) / std::log(h_list[i - 1] / h);
        out.rows.push_back({h, r, order});
        double X = std::log(h), Y = std::log(std::max(r, std::numeric_limits<double>::min()));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double n = static_cast<double>(h_list.size());
    out.fitted_order = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    out.accepted = out.fitted_order >= 1.5 && out.fitted_order <= 2.5;
    return out;
}

}  // namespace

FDScheme FDScheme::with_step(double h, int order) { return {h, h / 8.0, order}; }

void validate(const FDScheme& s) {
    if (s.order != 2 && s.order != 4) throw InvalidArgument("FDScheme: order must be 2 or 4");
    if (!(s.h_inner > 0.0) || !(s.h_outer > 0.0)) throw InvalidArgument("FDScheme: steps must be positive");
    if (s.h_inner > s.h_outer) throw InvalidArgument("FDScheme: h_inner must not exceed h_outer");
    if (s.h_inner < 1e3 * std::numeric_limits<double>::epsilon()) {
        throw InvalidArgument("FDScheme: h_inner below the rounding floor");
    }
}

Vec fd_grad(const ScalarField& u, const Vec& x, const FDScheme& s) {
    validate(s);
    const int n = static_cast<int>(x.size());
    const double h = s.h_inner;
    Vec g(n);
    Vec p = x;
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        auto at = [&](double off) {
            p[i] = xi + off;
            return eval_checked(u, p);
        };
        if (s.order == 2) {
            g[i] = (at(h) - at(-h)) / (2.0 * h);
        } else {
            g[i] = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
        }
        p[i] = xi;
    }
    return g;
}

double nlap_residual(const Gauge& g, int N, const ScalarField& u, const Vec& x, const FDScheme& s) {
    validate(s);
    require_dim(x, g.dim(), "nlap_residual");
    if (N != g.dim()) throw DimensionError("nlap_residual: N must match the gauge dimension");
    const double h = s.h_outer;
    auto flux = [&](const Vec& y) {
        Vec gu = fd_grad(u, y, s);
        if (gu.norm() < 1e-8) throw DegeneracyError("nlap_residual: gradient vanishes on the stencil");
        return a_field(g, N, gu);
    };
    double div = 0.0;
    Vec p = x;
    for (int i = 0; i < N; ++i) {
        p[i] = x[i] + h;
        double fp = flux(p)[i];
        p[i] = x[i] - h;
        double fm = flux(p)[i];
        p[i] = x[i];
        div += (fp - fm) / (2.0 * h);
    }
    return -div - std::exp(eval_checked(u, x));
}

double nlap_residual(const LiouvilleSolution& sol, const Vec& x, const FDScheme& s) {
    validate(s);
    require_dim(x, sol.N(), "nlap_residual");
    const double scale = std::max(1.0, dual_hat_eval(sol.gauge(), Vec(x - sol.x0())).value);
    FDScheme sc = s.scaled(scale);
    const ConvexCone& C = sol.cone();
    if (!C.is_full_space()) {
        // For x in C the distance to the boundary is the smallest facet distance.
        double dist = -C.max_facet_value(x);
        if (!(dist > 2.0 * (sc.h_outer + sc.h_inner))) {
            throw PlacementError("nlap_residual: stencil reaches the cone boundary");
        }
    }
    ScalarField u = [&sol](const Vec& y) { return solution_eval(sol, y); };
    return nlap_residual(sol.gauge(), sol.N(), u, x, sc);
}

double neumann_flux(const LiouvilleSolution& sol, int boundary_samples, std::uint64_t seed) {
    const ConvexCone& C = sol.cone();
    if (C.is_full_space()) return 0.0;
    if (boundary_samples < 1) throw InvalidArgument("neumann_flux: need at least one sample");
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < boundary_samples; ++i) {
        int j = i % C.facet_count();
        double r = std::exp(rng.uniform(std::log(0.1), std::log(10.0))) / sol.lambda();
        Vec x = r * C.facet_sample(j, rng, 1e-2);
        Vec nu = cone_normal(C, x);
        Vec a = a_field(sol.gauge(), sol.N(), solution_grad(sol, x));
        worst = std::max(worst, std::abs(a.dot(nu)));
    }
    return worst;
}

ConvergenceStudy convergence_study(const LiouvilleSolution& sol, const std::vector<Vec>& points,
                                   const std::vector<double>& h_list, int order) {
    return study(h_list, [&](double h) {
        double worst = 0.0;
        for (const auto& x : points) worst = std::max(worst, std::abs(nlap_residual(sol, x, FDScheme::with_step(h, order))));
        return worst;
    });
}

ConvergenceStudy convergence_study(const Gauge& g, int N, const ScalarField& u, const std::vector<Vec>& points,
                                   const std::vector<double>& h_list, int order) {
    return study(h_list, [&](double h) {
        double worst = 0.0;
        for (const auto& x : points) {
            worst = std::max(worst, std::abs(nlap_residual(g, N, u, x, FDScheme::with_step(h, order))));
        }
        return worst;
    });
}

}  // namespace flv
