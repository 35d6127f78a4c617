#include "flv/poincare.hpp"

#include "flv/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace flv {

namespace {

constexpr double kVanishTol = 1e-12;
constexpr int kVanishSamples = 64;
constexpr std::uint64_t kVanishSeed = 0xbac4;
constexpr int kRadialPanels = 8;
constexpr int kCorollaryBudget = 1024;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_cone_dim(const ConvexCone& C) {
    if (C.dim() < 2 || C.dim() > kMaxDim) throw DimensionError("RadialDomain: unsupported dimension");
}

Vec interior_direction(const ConvexCone& C, Rng& rng) {
    for (;;) {
        Vec w = rng.unit_vector(C.dim());
        if (C.max_facet_value(w) < 0.0) return w;
    }
}

// Radial segments [a, b] of the domain along omega, in polar coordinates about the
// quadrature center (the origin for every supported kind).
void segments(const RadialDomain& dom, const Vec& w, std::vector<std::pair<double, double>>& out) {
    out.clear();
    std::visit(overloaded{
                   [&](const FanShell& s) {
                       if (s.cone.max_facet_value(w) < 0.0) out.emplace_back(s.r, s.R);
                   },
                   [&](const MultiShell& s) {
                       if (s.cone.max_facet_value(w) < 0.0) out = s.shells;
                   },
                   [&](const Ball& b) { out.emplace_back(0.0, b.radius); },
               },
               dom.kind());
}

// Outer radius of the shell containing |x|, used by the back-radius factor.
double back_radius(const std::vector<std::pair<double, double>>& shells, double r) {
    for (const auto& [a, b] : shells) {
        if (r <= b) return b;
    }
    return shells.back().second;
}

const ConvexCone& shell_cone(const RadialDomain& dom) {
    if (const auto* f = std::get_if<FanShell>(&dom.kind())) return f->cone;
    return std::get<MultiShell>(dom.kind()).cone;
}

std::vector<std::pair<double, double>> shells_of(const RadialDomain& dom) {
    if (const auto* f = std::get_if<FanShell>(&dom.kind())) return {{f->r, f->R}};
    return std::get<MultiShell>(dom.kind()).shells;
}

// Polynomial in x / L.
TestFunction scaled_poly_times(std::function<double(const Vec&)> phi, std::function<Vec(const Vec&)> dphi,
                               CubicPoly q, double L, Vanishing v, std::string name) {
    TestFunction f;
    f.value = [phi, q, L](const Vec& x) { return phi(x) * q.value(x / L); };
    f.grad = [phi, dphi, q, L](const Vec& x) -> Vec {
        Vec y = x / L;
        return dphi(x) * q.value(y) + phi(x) * q.grad(y) / L;
    };
    f.vanishing = v;
    f.name = std::move(name);
    return f;
}

}  // namespace

RadialDomain RadialDomain::fan_shell(ConvexCone C, double r, double R) {
    check_cone_dim(C);
    if (!(r >= 0.0) || !(R > r) || !std::isfinite(R)) throw InvalidArgument("FanShell: need 0 <= r < R");
    const int d = C.dim();
    return RadialDomain(FanShell{std::move(C), r, R}, d, Vec::Zero(d));
}

RadialDomain RadialDomain::multi_shell(ConvexCone C, std::vector<std::pair<double, double>> shells) {
    check_cone_dim(C);
    if (shells.empty()) throw InvalidArgument("MultiShell: need at least one shell");
    std::sort(shells.begin(), shells.end());
    for (std::size_t i = 0; i < shells.size(); ++i) {
        const auto& [a, b] = shells[i];
        if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) throw InvalidArgument("MultiShell: need 0 <= r_i < R_i");
        if (i > 0 && !(a > shells[i - 1].second)) throw InvalidArgument("MultiShell: shells must be disjoint");
    }
    const int d = C.dim();
    return RadialDomain(MultiShell{std::move(C), std::move(shells)}, d, Vec::Zero(d));
}

RadialDomain RadialDomain::ball(double radius, Vec P) {
    const int d = static_cast<int>(P.size());
    if (d < 2 || d > kMaxDim) throw DimensionError("Ball: unsupported dimension");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("Ball: radius must be positive");
    if (!P.allFinite()) throw InvalidArgument("Ball: radial center must be finite");
    return RadialDomain(Ball{radius, P}, d, P);
}

bool RadialDomain::contains(const Vec& x) const {
    require_dim(x, dim_, "RadialDomain::contains");
    const double r = x.norm();
    return std::visit(overloaded{
                          [&](const FanShell& s) { return s.cone.max_facet_value(x) < 0.0 && r > s.r && r < s.R; },
                          [&](const MultiShell& s) {
                              if (!(s.cone.max_facet_value(x) < 0.0)) return false;
                              return std::any_of(s.shells.begin(), s.shells.end(),
                                                 [r](const auto& sh) { return r > sh.first && r < sh.second; });
                          },
                          [&](const Ball& b) { return r < b.radius; },
                      },
                      kind_);
}

double radial_width(const RadialDomain& dom) {
    return std::visit(overloaded{
                          [](const FanShell& s) { return s.R - s.r; },
                          [](const MultiShell& s) {
                              double w = 0.0;
                              for (const auto& [a, b] : s.shells) w = std::max(w, b - a);
                              return w;
                          },
                          // From inside, the longest ray runs from P through the center; from
                          // outside (or on the sphere), the longest chord is a diameter.
                          [](const Ball& b) {
                              const double d = b.P.norm();
                              return d <= b.radius ? b.radius + d : 2.0 * b.radius;
                          },
                      },
                      dom.kind());
}

std::vector<Vec> contact_points(const RadialDomain& dom, int n, ContactSide which, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("contact_points: n must be positive");
    Rng rng(seed);
    std::vector<Vec> out;
    if (const auto* b = std::get_if<Ball>(&dom.kind())) {
        const double rho = b->radius;
        if (which == ContactSide::front && b->P.norm() < rho) return out;
        while (static_cast<int>(out.size()) < n) {
            Vec z = rho * rng.unit_vector(dom.dim());
            Vec w = z - b->P;
            const double len = w.norm();
            if (len < 1e-12 * rho) continue;
            w /= len;
            const double bb = b->P.dot(w);
            const double disc = bb * bb - (b->P.squaredNorm() - rho * rho);
            if (!(disc > 0.0)) continue;  // tangent ray
            const double s = which == ContactSide::back ? -bb + std::sqrt(disc) : -bb - std::sqrt(disc);
            out.push_back(b->P + s * w);
        }
        return out;
    }
    const ConvexCone& C = shell_cone(dom);
    std::vector<double> radii;
    for (const auto& [a, bnd] : shells_of(dom)) {
        if (which == ContactSide::back) radii.push_back(bnd);
        else if (a > 0.0) radii.push_back(a);
    }
    if (radii.empty()) return out;
    for (int i = 0; i < n; ++i) out.push_back(radii[static_cast<std::size_t>(i) % radii.size()] * interior_direction(C, rng));
    return out;
}

bool in_contact_set(const RadialDomain& dom, const Vec& x, ContactSide which, double tol) {
    require_dim(x, dom.dim(), "in_contact_set");
    const double r = x.norm();
    if (const auto* b = std::get_if<Ball>(&dom.kind())) {
        if (std::abs(r - b->radius) > tol * b->radius) return false;
        const double out = x.dot(x - b->P);
        if (which == ContactSide::back) return out >= -tol;
        return b->P.norm() > b->radius && out <= tol;
    }
    const ConvexCone& C = shell_cone(dom);
    if (C.max_facet_value(x) > tol) return false;
    for (const auto& [a, bnd] : shells_of(dom)) {
        const double target = which == ContactSide::back ? bnd : a;
        if (target > 0.0 && std::abs(r - target) <= tol * target) return true;
    }
    return false;
}

CubicPoly CubicPoly::random(int dim, Rng& rng) {
    CubicPoly p;
    std::array<std::uint8_t, kMaxDim> e{};
    // Exponent vectors of total degree <= 3 in lexicographic order.
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == dim) {
            p.exponents.push_back(e);
            p.coeffs.push_back(rng.uniform(-1.0, 1.0));
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = static_cast<std::uint8_t>(k);
            rec(i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(0, 3);
    return p;
}

namespace {

using PowerTable = std::array<std::array<double, 4>, kMaxDim>;

PowerTable powers(const Vec& x) {
    PowerTable pw;
    for (int i = 0; i < x.size(); ++i) pw[i] = {1.0, x[i], x[i] * x[i], x[i] * x[i] * x[i]};
    return pw;
}

}  // namespace

double CubicPoly::value(const Vec& x) const {
    const int n = static_cast<int>(x.size());
    const PowerTable pw = powers(x);
    double s = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        double t = coeffs[m];
        for (int i = 0; i < n; ++i) t *= pw[i][exponents[m][i]];
        s += t;
    }
    return s;
}

Vec CubicPoly::grad(const Vec& x) const {
    const int n = static_cast<int>(x.size());
    const PowerTable pw = powers(x);
    Vec g = Vec::Zero(n);
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        const auto& e = exponents[m];
        for (int j = 0; j < n; ++j) {
            if (e[j] == 0) continue;
            double t = coeffs[m] * e[j] * pw[j][e[j] - 1];
            for (int i = 0; i < n; ++i) {
                if (i != j) t *= pw[i][e[i]];
            }
            g[j] += t;
        }
    }
    return g;
}

TestFunction cap_cutoff_function(double radius, const Vec& e, double eps, const CubicPoly& p1, const CubicPoly& p2) {
    if (!(eps > 0.0)) throw InvalidArgument("cap_cutoff_function: eps must be positive");
    Vec u = e.normalized();
    const double rr = radius * radius;
    TestFunction f;
    f.value = [=](const Vec& x) {
        const double s = u.dot(x);
        const double chi = s < -eps ? (eps + s) * (eps + s) : 0.0;
        return chi * p1.value(x) + (rr - x.squaredNorm()) * p2.value(x);
    };
    f.grad = [=](const Vec& x) -> Vec {
        const double s = u.dot(x);
        const double chi = s < -eps ? (eps + s) * (eps + s) : 0.0;
        const double dchi = s < -eps ? 2.0 * (eps + s) : 0.0;
        return dchi * p1.value(x) * u + chi * p1.grad(x) - 2.0 * p2.value(x) * x + (rr - x.squaredNorm()) * p2.grad(x);
    };
    f.vanishing = Vanishing::back_contact;
    f.name = "cap-cutoff";
    return f;
}

std::vector<TestFunction> test_family(const RadialDomain& dom, int count, std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("test_family: count must be positive");
    Rng rng(seed);
    const int N = dom.dim();
    std::vector<TestFunction> out;
    if (const auto* b = std::get_if<Ball>(&dom.kind())) {
        const double rho = b->radius;
        const double d = b->P.norm();
        if (d > rho) {
            Vec e = -b->P / d;
            for (int i = 0; i < count; ++i) {
                auto p1 = CubicPoly::random(N, rng);
                auto p2 = CubicPoly::random(N, rng);
                auto f = cap_cutoff_function(rho, e, rho * rho / d, p1, p2);
                f.name += "-" + std::to_string(i);
                out.push_back(std::move(f));
            }
            return out;
        }
        auto phi = [rho](const Vec& x) { return rho * rho - x.squaredNorm(); };
        auto dphi = [](const Vec& x) -> Vec { return -2.0 * x; };
        for (int i = 0; i < count; ++i) {
            if (i % 3 == 2) {
                const int k = 1 + (i / 3) % 3;
                TestFunction f;
                f.value = [rho, k](const Vec& x) { return std::pow(rho - x.norm(), k); };
                f.grad = [rho, k](const Vec& x) -> Vec {
                    const double r = x.norm();
                    if (r == 0.0) return Vec::Zero(x.size());
                    return -k * std::pow(rho - r, k - 1) / r * x;
                };
                f.vanishing = Vanishing::boundary;
                f.name = "ball-radial-" + std::to_string(i);
                out.push_back(std::move(f));
                continue;
            }
            out.push_back(scaled_poly_times(phi, dphi, CubicPoly::random(N, rng), rho, Vanishing::boundary,
                                            "ball-cubic-" + std::to_string(i)));
        }
        return out;
    }
    const auto shells = shells_of(dom);
    const double L = shells.back().second;
    for (int i = 0; i < count; ++i) {
        const int mode = i % 4;
        const int k = mode == 2 ? 1 + (i / 4) % 3 : (mode == 3 ? 2 : 1);
        auto phi = [shells, k](const Vec& x) {
            const double r = x.norm();
            return std::pow(back_radius(shells, r) - r, k);
        };
        auto dphi = [shells, k](const Vec& x) -> Vec {
            const double r = x.norm();
            if (r == 0.0) return Vec::Zero(x.size());
            return -k * std::pow(back_radius(shells, r) - r, k - 1) / r * x;
        };
        if (mode == 2) {
            TestFunction f{phi, dphi, Vanishing::back_contact, "shell-radial-" + std::to_string(i)};
            out.push_back(std::move(f));
            continue;
        }
        out.push_back(scaled_poly_times(phi, dphi, CubicPoly::random(N, rng), L, Vanishing::back_contact,
                                        "shell-cubic-" + std::to_string(i)));
    }
    return out;
}

PoincareResult poincare_ratio(const RadialDomain& dom, const TestFunction& f, double p, const QuadratureSpec& quad) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("poincare_ratio: p must be finite and >= 1");
    if (!f.value || !f.grad) throw InvalidArgument("poincare_ratio: test function is empty");
    if (f.vanishing == Vanishing::none) {
        throw HypothesisError("poincare_ratio: test function is not declared to vanish on the back contact set");
    }
    for (const auto& x : contact_points(dom, kVanishSamples, ContactSide::back, kVanishSeed)) {
        if (!(std::abs(f.value(x)) <= kVanishTol)) {
            throw HypothesisError("poincare_ratio: test function does not vanish on the back contact set");
        }
    }
    const int N = dom.dim();
    std::vector<std::pair<double, double>> segs;
    Vec x(N);
    auto pw = [p](double a) {
        if (p == 1.0) return a;
        if (p == 2.0) return a * a;
        if (p == 4.0) return (a * a) * (a * a);
        return std::pow(a, p);
    };
    using Rule = boost::math::quadrature::gauss<double, 16>;
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    // Both norms on one composite rule over [a, b].
    auto radial = [&](const Vec& w, double a, double b, int panels, double& fsum, double& gsum) {
        const double h = (b - a) / panels;
        auto add = [&](double s, double wt) {
            x = s * w;
            const double jac = wt * std::pow(s, N - 1);
            fsum += jac * pw(std::abs(f.value(x)));
            gsum += jac * pw(f.grad(x).norm());
        };
        for (int k = 0; k < panels; ++k) {
            const double c = a + (k + 0.5) * h, r = 0.5 * h;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (xs[i] == 0.0) {
                    add(c, r * ws[i]);
                    continue;
                }
                add(c - r * xs[i], r * ws[i]);
                add(c + r * xs[i], r * ws[i]);
            }
        }
    };
    auto integrand = [&](const Vec& w) {
        std::array<double, 4> v{};
        segments(dom, w, segs);
        for (const auto& [a, b] : segs) {
            radial(w, a, b, kRadialPanels, v[0], v[1]);
            radial(w, a, b, kRadialPanels / 2, v[2], v[3]);
        }
        return v;
    };
    std::vector<double> breaks;
    if (N == 2 && !std::holds_alternative<Ball>(dom.kind())) breaks = shell_cone(dom).circle_breaks();
    auto est = integrate_over_sphere<4>(N, quad, integrand, breaks);

    const double F = est[0].value, G = est[1].value;
    const double errF = std::hypot(est[0].err, F - est[2].value);
    const double errG = std::hypot(est[1].err, G - est[3].value);
    if (!(G > 0.0)) throw HypothesisError("poincare_ratio: gradient norm vanishes");
    PoincareResult r;
    r.f_norm = std::pow(F, 1.0 / p);
    r.grad_norm = std::pow(G, 1.0 / p);
    r.ratio = r.f_norm / r.grad_norm;
    r.bound = radial_width(dom);
    r.sigma_rel = ((F > 0.0 ? errF / F : 0.0) + errG / G) / p;
    r.pass = r.ratio <= r.bound * (1.0 + 3.0 * r.sigma_rel);
    return r;
}

CorollaryReport corollary_ball_check(double p, double eps, int family_size, std::uint64_t seed, int N) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("corollary_ball_check: need 0 < eps < 1");
    if (family_size < 1) throw InvalidArgument("corollary_ball_check: family_size must be positive");
    QuadratureSpec quad;
    quad.budget = kCorollaryBudget;
    auto run = [&](const RadialDomain& dom, const std::vector<TestFunction>& fam) {
        CorollaryFamily out;
        out.bound = radial_width(dom);
        out.pass = true;
        for (const auto& f : fam) {
            auto r = poincare_ratio(dom, f, p, quad);
            out.max_ratio = std::max(out.max_ratio, r.ratio);
            out.max_sigma_rel = std::max(out.max_sigma_rel, r.sigma_rel);
            out.pass = out.pass && r.pass;
            ++out.count;
        }
        return out;
    };
    CorollaryReport rep;
    auto inner = RadialDomain::ball(1.0, Vec::Zero(N));
    rep.w0 = run(inner, test_family(inner, family_size, derive_seed(seed, 1)));

    Vec eN = Vec::Zero(N);
    eN[N - 1] = 1.0;
    auto outer = RadialDomain::ball(1.0, -(2.0 / eps) * eN);
    Rng rng(derive_seed(seed, 2));
    std::vector<TestFunction> fam;
    for (int i = 0; i < family_size; ++i) {
        auto p1 = CubicPoly::random(N, rng);
        auto p2 = CubicPoly::random(N, rng);
        fam.push_back(cap_cutoff_function(1.0, eN, eps, p1, p2));
    }
    rep.cap = run(outer, fam);
    return rep;
}

}  // namespace flv
