#pragma once

#include "flv/types.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace flv {

struct Euclidean {};

/// H(xi) = ||xi||_q.
struct PNorm {
    double q;
};

/// H(xi) = ||M xi||_q with M invertible.
struct LinearImage {
    Mat M;
    double q;
};

/// H(xi) = sqrt(xi^T A xi) with A symmetric positive definite.
struct Ellipsoid {
    Mat A;
};

/// H(xi) = |xi| + <b, xi> with |b| < 1; the only asymmetric family.
struct Drifted {
    Vec b;
};

enum class GaugeKind { euclidean, pnorm, linear_image, ellipsoid, drifted };

/// A positively 1-homogeneous convex function on R^N, positive away from the origin.
///
/// Construction validates the family parameters. `value` and `gradient` are the
/// unchecked hot-path evaluators; the free functions `eval_gauge` / `grad_gauge`
/// add the dimension and regularity guards.
class Gauge {
public:
    using Family = std::variant<Euclidean, PNorm, LinearImage, Ellipsoid, Drifted>;

    static Gauge euclidean(int dim);
    static Gauge pnorm(int dim, double q);
    static Gauge linear_image(const Mat& M, double q);
    static Gauge ellipsoid(const Mat& A);
    static Gauge drifted(const Vec& b);

    int dim() const noexcept { return dim_; }
    GaugeKind kind() const noexcept { return static_cast<GaugeKind>(family_.index()); }
    const Family& family() const noexcept { return family_; }
    std::string name() const;

    double value(const Vec& xi) const;

    /// Gradient by the family formula; for q < 2 this is the continuous extension
    /// across coordinate hyperplanes (no regularity guard).
    Vec gradient(const Vec& xi) const;

    /// Xi -> H(-xi).
    Gauge reflected() const;

    bool is_symmetric() const noexcept { return kind() != GaugeKind::drifted; }

private:
    Gauge(Family family, int dim) : family_(std::move(family)), dim_(dim) {}

    Family family_;
    int dim_;
};

/// Components below this fraction of the largest one count as lying on a
/// coordinate hyperplane, where ||.||_q with q < 2 is not C^2.
inline constexpr double kRegularityThreshold = 1e-9;

double eval_gauge(const Gauge& g, const Vec& xi);
Vec grad_gauge(const Gauge& g, const Vec& xi);

/// a(xi) = H^{N-1}(xi) grad H(xi), with a(0) = 0.
Vec a_field(const Gauge& g, int N, const Vec& xi);

struct SphereExtrema {
    double c_H;
    double C_H;
};

SphereExtrema sphere_extrema(const Gauge& g, int budget);

struct EllipticityEstimate {
    double c1_hat;
    double c2_hat;
    double lambda_ell_hat;
    int samples;
};

/// Seeded sampling of the monotonicity and Lipschitz ratios of the a-field.
EllipticityEstimate check_ellipticity(const Gauge& g, int N, int samples, std::uint64_t seed);

}  // namespace flv
