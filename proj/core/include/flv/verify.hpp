#pragma once

#include "flv/liouville.hpp"
#include "flv/quadrature.hpp"

#include <vector>

namespace flv {

/// One side-by-side comparison. `tolerance` is absolute; the check passes when
/// abs_gap <= max(tolerance, 3 quadrature_err).
struct BalanceReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_gap = 0.0;
    double rel_gap = 0.0;
    double quadrature_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Builds a report with tolerance = rel_tol * |rhs|.
BalanceReport make_balance(double lhs, double rhs, double err, double rel_tol);

struct MassEstimate {
    /// Cone invariance and homogeneity reduce the integral to N |C cap B_1| times a
    /// one-dimensional radial integral.
    Estimate semi_analytic;
    /// Direct Monte Carlo over C, truncated at Hh0-radius truncation_radius, plus tail_bound.
    Estimate monte_carlo;
    double tail_bound = 0.0;
    double truncation_radius = 0.0;
    /// |C cap B_1| of the dual Wulff ball.
    Estimate unit_measure;
};

MassEstimate total_mass(const LiouvilleSolution& sol, const QuadratureSpec& quad);

struct MassQuantization {
    /// Semi-analytic mass against c_N |C cap B_1|.
    BalanceReport balance;
    /// Monte Carlo mass against the same right-hand side.
    BalanceReport cross_check;
    /// mass + 3 sigma >= c_N |C cap B_1| for both estimators.
    bool lower_bound_holds = false;
    MassEstimate mass;
};

MassQuantization mass_quantization_check(const LiouvilleSolution& sol, const QuadratureSpec& quad, double rel_tol = 5e-3);

/// Outward conormal flux through C cap {Hh0(x - x0) = R} against the mass inside.
BalanceReport flux_mass_balance(const LiouvilleSolution& sol, double R, const QuadratureSpec& quad, double rel_tol = 1e-2);

struct CoareaReport {
    /// Mass of {u > t} against the surface integral of H^N(grad u)/|grad u| over {u = t}.
    BalanceReport balance;
    double radius = 0.0;
    /// Closed-form level mass [B_N (1 - e^{(t-t0)/N})]^{N-1}.
    double closed_form = 0.0;
    double closed_form_rel_gap = 0.0;
};

CoareaReport coarea_level_mass(const LiouvilleSolution& sol, double t, const QuadratureSpec& quad, double rel_tol = 1e-2);

struct LevelGeometryRow {
    double t;
    double radius;
    double radius_closed_form;
    double radius_rel_gap;
    /// (max - min) / mean of H(grad u) over sampled points of the level set.
    double h_grad_spread;
    /// The same spread for |grad u|.
    double grad_norm_spread;
    double mass_closed_form;
    double mass_from_gradient;
    double mass_rel_gap;
};

/// Level-set invariants at each t < t0, sampled on 64 seeded points per level.
std::vector<LevelGeometryRow> level_geometry_check(const LiouvilleSolution& sol, const std::vector<double>& t_list,
                                                   const QuadratureSpec& quad);

struct PohozaevReport {
    /// N int e^u - boundary e^u term against the gradient boundary terms.
    BalanceReport balance;
    /// Surface integral of e^u <x - x0, nu> over C cap {Hh0(x - x0) = R}.
    Estimate boundary_density_term;
};

PohozaevReport pohozaev_check(const LiouvilleSolution& sol, double R, const QuadratureSpec& quad, double rel_tol = 1e-2);

/// Least-squares slope of log(boundary e^u term) against log R.
double boundary_term_decay_slope(const LiouvilleSolution& sol, const std::vector<double>& radii, const QuadratureSpec& quad);

}  // namespace flv
