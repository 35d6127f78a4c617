#pragma once

#include "flv/gauge.hpp"
#include "flv/quadrature.hpp"
#include "flv/rng.hpp"

#include <limits>
#include <variant>
#include <vector>

namespace flv {

/// C = R^k x C~ with C~ = {y in R^{N-k} : <n_j, y> <= 0 for all j} pointed.
class ConvexCone {
public:
    ConvexCone(int dim, int k, std::vector<Vec> normals);

    static ConvexCone full_space(int dim);
    /// {x : x_N > 0}.
    static ConvexCone half_space(int dim);
    /// R^{N-m} x (0, inf)^m: the last m coordinates positive.
    static ConvexCone orthant(int dim, int m);

    int dim() const noexcept { return dim_; }
    int k() const noexcept { return k_; }
    int facet_count() const noexcept { return static_cast<int>(normals_.size()); }
    const std::vector<Vec>& normals() const noexcept { return normals_; }
    bool is_full_space() const noexcept { return k_ == dim_; }

    /// Facet normal j embedded in R^N (zero on the line factor).
    Vec full_normal(int j) const;

    /// max_j <n_j, y~>, or -inf for C = R^N.
    double max_facet_value(const Vec& x) const;

    /// True when the last N-k coordinates vanish, i.e. x lies in R^k x {0}.
    bool in_line_factor(const Vec& x, double tol = 1e-12) const;

    /// sup{t >= 0 : x0 + s w in closed C for s in [0, t]} for x0 in closed C; may be +inf.
    double exit_time(const Vec& x0, const Vec& w) const;

    /// A point on facet j whose distance to every other facet hyperplane exceeds
    /// margin * |y~|, with |y~| = 1 when k < N - 1.
    Vec facet_sample(int j, Rng& rng, double margin) const;

    /// Angles (N = 2) of the facet lines, where cone-restricted integrands jump.
    std::vector<double> circle_breaks() const;

    bool operator==(const ConvexCone& o) const;

private:
    int dim_;
    int k_;
    std::vector<Vec> normals_;
};

enum class Placement { inside, boundary, outside };

Placement cone_contains(const ConvexCone& C, const Vec& x, double tol = 1e-12);

/// Outward unit normal of the single facet containing x.
Vec cone_normal(const ConvexCone& C, const Vec& x, double tol = 1e-9);

/// C intersected with the Wulff ball {x : H_0(x0 - x) < R} of the gauge.
struct WulffCap {
    Gauge gauge;
    double R;
    Vec x0;
    ConvexCone cone;

    WulffCap(Gauge g, double radius, Vec center, ConvexCone c);

    bool contains(const Vec& x) const;
};

struct Box {
    Vec lo;
    Vec hi;
};

struct Simplex {
    std::vector<Vec> vertices;
};

using Shape = std::variant<WulffCap, Box, Simplex>;

/// Lebesgue measure of C intersected with the cap.
Estimate wulff_cap_measure(const WulffCap& cap, const QuadratureSpec& quad);

/// Lebesgue measure of C intersected with E.
Estimate shape_measure(const Shape& E, const ConvexCone& C, const QuadratureSpec& quad);

/// Integral of g(nu) over the part of the boundary of E inside the open cone.
Estimate anisotropic_perimeter(const Shape& E, const ConvexCone& C, const Gauge& g, const QuadratureSpec& quad);

struct IsoperimetricResult {
    double quotient;
    double wulff_quotient;
    bool is_equality;
    /// One-sigma error of the quotient, propagated from perimeter and measure.
    double err;
};

IsoperimetricResult isoperimetric_check(const Shape& E, const ConvexCone& C, const Gauge& g, const QuadratureSpec& quad,
                                        double equality_tol = 1e-3);

struct WulffIdentity {
    Estimate perimeter;
    Estimate n_times_volume;
};

/// Perimeter of the unit Wulff shape of g relative to C against N times its measure.
WulffIdentity wulff_perimeter_identity(const ConvexCone& C, const Gauge& g, const QuadratureSpec& quad);

/// Rounding floor applied to deterministic tensor estimates.
inline constexpr double kTensorErrFloor = 1e-12;

}  // namespace flv
