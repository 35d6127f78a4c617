#pragma once

#include "flv/cone.hpp"
#include "flv/gauge.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace flv {

/// c_N = N (N^2 / (N-1))^{N-1}.
double c_N(int N);

/// u(x) = log c_N + N log(lambda) - N log(1 + Hh0(lambda (x - x0))^{N/(N-1)}),
/// Hh0 being the dual gauge evaluated at -x.
///
/// The center must lie in R^k x {0}: anywhere for C = R^N, on the line factor
/// otherwise, the vertex for a pointed cone.
class LiouvilleSolution {
public:
    LiouvilleSolution(Gauge g, int N, double lambda, Vec x0, ConvexCone cone);

    /// Skips the center placement rule; used to build counterexamples.
    static LiouvilleSolution unchecked(Gauge g, int N, double lambda, Vec x0, ConvexCone cone);

    const Gauge& gauge() const noexcept { return gauge_; }
    int N() const noexcept { return n_; }
    double lambda() const noexcept { return lambda_; }
    const Vec& x0() const noexcept { return x0_; }
    const ConvexCone& cone() const noexcept { return cone_; }

    /// sup u = u(x0) = log(c_N lambda^N).
    double t0() const noexcept { return t0_; }

private:
    LiouvilleSolution(Gauge g, int N, double lambda, Vec x0, ConvexCone cone, bool check);

    Gauge gauge_;
    int n_;
    double lambda_;
    Vec x0_;
    ConvexCone cone_;
    double t0_;
};

double solution_eval(const LiouvilleSolution& sol, const Vec& x);
Vec solution_grad(const LiouvilleSolution& sol, const Vec& x);
double density_eval(const LiouvilleSolution& sol, const Vec& x);

/// Hh0-radius of the level set {u = t}.
double level_radius(const LiouvilleSolution& sol, double t);

/// The same radius from R^N = c_N (1 - e^{(t-t0)/N})^{N-1} e^{-((N-1)t + t0)/N}.
double level_radius_closed_form(const LiouvilleSolution& sol, double t);

/// Mass of {u > t}: [B_N (1 - e^{(t-t0)/N})]^{N-1} with
/// B_N = N/(N-1) N^{N/(N-1)} unit^{1/(N-1)} and unit = |C cap B_1|.
double level_mass_closed_form(const LiouvilleSolution& sol, double t, double unit_cap_measure);

/// Mass of {u > t} rebuilt from the gradient: N H^{N-1}(grad u) unit R^{N-1}(t),
/// with H(grad u) read at one point of the level set.
double level_mass_from_gradient(const LiouvilleSolution& sol, double t, double unit_cap_measure);

/// N^2 / (N-1), the decay exponent of the family.
double beta_reference(int N);

/// [mass / (N unit)]^{1/(N-1)}.
double beta0_from_mass(double mass, int N, double unit_cap_measure);

struct ShellDecay {
    double radius;
    /// max over the shell of |x| |grad(u + beta log Hh0(x - x0))|.
    double max_decay;
};

struct AsymptoticReport {
    double beta_est = 0.0;
    double beta_ref = 0.0;
    double beta_err = 0.0;
    /// max - min of u + beta log Hh0(x - x0) over all samples.
    double variation = 0.0;
    std::vector<ShellDecay> shells;
    bool decay_decreasing = false;
    /// max of u + N log|x| over all samples.
    double C_est = 0.0;
    /// u + N log|x| on the outer half of the radii stays below its inner-half maximum.
    bool upper_bound_holds = false;
    /// Smallest L with log|x| / L <= t0 - u(x) <= L log|x| on the samples.
    double L_est = 0.0;
    /// Local slope estimates (radius, beta) from consecutive radii, averaged over rays.
    std::vector<std::pair<double, double>> local_beta;
    int rays = 0;
};

/// Far-field checks along 8 seeded rays strictly inside C, with `ray_samples`
/// log-spaced Hh0-radii per ray in [radius_range.first, radius_range.second].
AsymptoticReport asymptotic_checks(const LiouvilleSolution& sol, int ray_samples,
                                   std::pair<double, double> radius_range);

/// Seeded unit directions strictly inside C, at least `margin` from every facet.
std::vector<Vec> interior_directions(const ConvexCone& C, int count, double margin, std::uint64_t seed);

}  // namespace flv
