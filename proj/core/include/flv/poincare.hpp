#pragma once

#include "flv/cone.hpp"
#include "flv/quadrature.hpp"
#include "flv/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace flv {

/// (B_R \ closed B_r) cap C, radial center 0.
struct FanShell {
    ConvexCone cone;
    double r;
    double R;
};

/// Union of disjoint shells (r_i, R_i) inside C, radial center 0.
struct MultiShell {
    ConvexCone cone;
    std::vector<std::pair<double, double>> shells;
};

/// B_radius(0) seen from the radial center P.
struct Ball {
    double radius;
    Vec P;
};

class RadialDomain {
public:
    using Kind = std::variant<FanShell, MultiShell, Ball>;

    static RadialDomain fan_shell(ConvexCone C, double r, double R);
    /// Shells are sorted by inner radius; overlapping or touching shells are rejected.
    static RadialDomain multi_shell(ConvexCone C, std::vector<std::pair<double, double>> shells);
    static RadialDomain ball(double radius, Vec P);

    const Kind& kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    const Vec& P() const noexcept { return P_; }
    bool contains(const Vec& x) const;

private:
    RadialDomain(Kind k, int dim, Vec P) : kind_(std::move(k)), dim_(dim), P_(std::move(P)) {}

    Kind kind_;
    int dim_;
    Vec P_;
};

/// Longest enter-to-exit segment over rays from P, in closed form.
double radial_width(const RadialDomain& dom);

enum class ContactSide { front, back };

/// Seeded points of the front (first hit) or back (last hit) contact set. An empty
/// set, like the front of a ball around an interior P, gives an empty list.
std::vector<Vec> contact_points(const RadialDomain& dom, int n, ContactSide which, std::uint64_t seed);

/// Membership of a boundary point in a contact set, up to tol in the radii.
bool in_contact_set(const RadialDomain& dom, const Vec& x, ContactSide which, double tol = 1e-9);

enum class Vanishing { none, back_contact, boundary };

struct TestFunction {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
    Vanishing vanishing = Vanishing::none;
    std::string name;
};

/// Polynomial of total degree <= 3 with coefficients drawn from [-1, 1].
struct CubicPoly {
    std::vector<std::array<std::uint8_t, kMaxDim>> exponents;
    std::vector<double> coeffs;

    static CubicPoly random(int dim, Rng& rng);
    double value(const Vec& x) const;
    Vec grad(const Vec& x) const;
};

/// Seeded family suited to the domain: shells get a back-radius factor times a cubic
/// plus radial profiles; a ball around an interior P gets (rho^2 - |x|^2) times a
/// cubic; a ball seen from outside gets a cutoff in the direction away from P.
std::vector<TestFunction> test_family(const RadialDomain& dom, int count, std::uint64_t seed);

/// chi(<x, e>) p1(x) + (rho^2 - |x|^2) p2(x) with chi(s) = (-eps - s)^2 for s < -eps and 0
/// otherwise, so f vanishes on the sphere where <x, e> > -eps.
TestFunction cap_cutoff_function(double radius, const Vec& e, double eps, const CubicPoly& p1, const CubicPoly& p2);

struct PoincareResult {
    double f_norm = 0.0;
    double grad_norm = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    double sigma_rel = 0.0;
    bool pass = false;
};

/// ||f||_p / ||grad f||_p by polar quadrature; the rule has about 128 radial nodes
/// per direction and quad.budget directions. Throws HypothesisError when f is not
/// declared to vanish or fails |f| <= 1e-12 on 64 sampled back contact points.
PoincareResult poincare_ratio(const RadialDomain& dom, const TestFunction& f, double p, const QuadratureSpec& quad);

struct CorollaryFamily {
    double max_ratio = 0.0;
    double bound = 0.0;
    double max_sigma_rel = 0.0;
    int count = 0;
    bool pass = false;
};

struct CorollaryReport {
    /// W^{1,p}_0 functions on B_1, constant 1.
    CorollaryFamily w0;
    /// Functions vanishing on the unit sphere where x_N > -eps, constant 2.
    CorollaryFamily cap;
};

CorollaryReport corollary_ball_check(double p, double eps, int family_size, std::uint64_t seed, int N = 2);

}  // namespace flv
