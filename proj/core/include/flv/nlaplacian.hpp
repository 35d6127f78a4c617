#pragma once

#include "flv/gauge.hpp"
#include "flv/liouville.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace flv {

using ScalarField = std::function<double(const Vec&)>;

struct FDScheme {
    double h_outer = 1e-3;
    double h_inner = 1.25e-4;
    /// Central-difference order of the inner gradient, 2 or 4.
    int order = 2;

    /// h_outer = h, h_inner = h / 8.
    static FDScheme with_step(double h, int order = 2);

    FDScheme scaled(double s) const { return {h_outer * s, h_inner * s, order}; }
};

void validate(const FDScheme& s);

Vec fd_grad(const ScalarField& u, const Vec& x, const FDScheme& s);

/// -div_h(a(grad_h u))(x) - e^{u(x)} with the steps of the scheme as given.
double nlap_residual(const Gauge& g, int N, const ScalarField& u, const Vec& x, const FDScheme& s);

/// Residual of the solution at an interior point; steps are multiplied by
/// max(1, Hh0(x - x0)) and the stencil must stay 2(h_outer + h_inner) inside C.
double nlap_residual(const LiouvilleSolution& sol, const Vec& x, const FDScheme& s);

/// max |<a(grad u), nu>| over seeded points on single facets of the cone.
double neumann_flux(const LiouvilleSolution& sol, int boundary_samples, std::uint64_t seed);

struct ConvergenceRow {
    double h;
    double max_residual;
    /// log2-ratio against the previous row; NaN for the first row.
    double order;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    /// Least-squares slope of log residual against log h.
    double fitted_order = 0.0;
    /// Fitted order within [1.5, 2.5].
    bool accepted = false;
};

ConvergenceStudy convergence_study(const LiouvilleSolution& sol, const std::vector<Vec>& points,
                                   const std::vector<double>& h_list, int order = 2);

/// Same study for an arbitrary field with fixed (unscaled) steps.
ConvergenceStudy convergence_study(const Gauge& g, int N, const ScalarField& u, const std::vector<Vec>& points,
                                   const std::vector<double>& h_list, int order = 2);

}  // namespace flv
