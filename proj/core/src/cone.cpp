#include "flv/cone.hpp"

#include "flv/dual.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <numbers>

namespace flv {

namespace {

constexpr double kVertexTol = 1e-12;

bool in_closed(const ConvexCone& C, const Vec& x) {
    return C.max_facet_value(x) <= kVertexTol * (1.0 + x.norm());
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void enforce_target(const Estimate& e, const QuadratureSpec& q, const char* what) {
    if (e.err > q.target_rel_err * std::abs(e.value) && e.err > 1e-14) {
        throw QuadratureError(std::string(what) + ": error estimate exceeds target_rel_err at this budget");
    }
}

// Uniform point of the simplex spanned by the given vertices.
Vec simplex_point(const std::vector<Vec>& v, Rng& rng) {
    std::vector<double> w(v.size());
    double s = 0.0;
    for (auto& x : w) {
        x = -std::log(rng.uniform());
        s += x;
    }
    Vec p = Vec::Zero(v[0].size());
    for (std::size_t i = 0; i < v.size(); ++i) p += (w[i] / s) * v[i];
    return p;
}

// (N-1)-volume of the simplex spanned by N points in R^N.
double facet_volume(const std::vector<Vec>& v) {
    const int n = static_cast<int>(v[0].size());
    Mat E(n, static_cast<int>(v.size()) - 1);
    for (std::size_t i = 1; i < v.size(); ++i) E.col(static_cast<int>(i) - 1) = v[i] - v[0];
    Mat G = E.transpose() * E;
    return std::sqrt(std::max(0.0, G.determinant())) / factorial(static_cast<int>(v.size()) - 1);
}

// Fraction of a flat piece lying in the open cone, by seeded sampling.
template <class Sampler>
Estimate open_fraction(const ConvexCone& C, Sampler&& sample, const QuadratureSpec& q, std::uint64_t stream) {
    Rng rng(derive_seed(q.seed, stream));
    const int n = std::max(q.budget, 1000);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        if (C.max_facet_value(sample(rng)) < 0.0) ++hits;
    }
    double p = static_cast<double>(hits) / n;
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n)};
}

// The facet contributes nothing to the relative perimeter when it lies inside a
// supporting hyperplane of C; otherwise it is either in C up to a null set or
// partially cut.
Estimate facet_term(const ConvexCone& C, const std::vector<Vec>& verts, double area, double weight,
                    const std::function<Vec(Rng&)>& sample, const QuadratureSpec& q, std::uint64_t stream) {
    for (int j = 0; j < C.facet_count(); ++j) {
        Vec n = C.full_normal(j);
        bool on = std::all_of(verts.begin(), verts.end(), [&](const Vec& v) {
            return std::abs(n.dot(v)) <= kVertexTol * (1.0 + v.norm());
        });
        if (on) return {0.0, 0.0};
    }
    bool all_in = std::all_of(verts.begin(), verts.end(), [&](const Vec& v) { return in_closed(C, v); });
    if (all_in) return {weight * area, 0.0};
    Estimate f = open_fraction(C, sample, q, stream);
    return {weight * area * f.value, weight * area * f.err};
}

// Volume (index 0) and g-weighted surface (index 1) of a cap, by quadrature over
// ray directions from the center.
std::array<Estimate, 2> cap_integrals(const WulffCap& cap, const Gauge* g, const QuadratureSpec& q) {
    const int n = cap.gauge.dim();
    auto integrand = [&](const Vec& w) -> std::array<double, 2> {
        DualEvaluation d = dual_hat_eval(cap.gauge, w);
        const double rho = cap.R / d.value;
        const double tc = cap.cone.exit_time(cap.x0, w);
        std::array<double, 2> out{std::pow(std::min(rho, tc), n) / n, 0.0};
        if (g != nullptr && rho < tc) {
            Vec grad = -*d.maximizer;
            double gn = grad.norm();
            Vec nu = grad / gn;
            out[1] = g->value(nu) * std::pow(rho, n) * gn / cap.R;
        }
        return out;
    };
    std::vector<double> breaks;
    if (n == 2 && cap.cone.in_line_factor(cap.x0)) breaks = cap.cone.circle_breaks();
    auto est = integrate_over_sphere<2>(n, q, integrand, breaks);
    if (q.method == QuadMethod::tensor_polar) {
        for (auto& e : est) e.err = std::max(e.err, kTensorErrFloor * std::abs(e.value));
    }
    return est;
}

std::vector<Vec> box_vertices(const Box& b, int fixed_axis, bool upper) {
    const int n = static_cast<int>(b.lo.size());
    std::vector<Vec> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        bool keep = true;
        for (int i = 0; i < n; ++i) {
            bool hi = (mask >> i) & 1;
            v[i] = hi ? b.hi[i] : b.lo[i];
            if (i == fixed_axis && hi != upper) keep = false;
        }
        if (keep) out.push_back(v);
    }
    return out;
}

void validate_box(const Box& b, int n) {
    require_dim(b.lo, n, "box");
    require_dim(b.hi, n, "box");
    if (((b.hi - b.lo).array() <= 0.0).any()) throw InvalidArgument("box: hi must exceed lo in every coordinate");
}

double simplex_volume(const Simplex& s) {
    const int n = static_cast<int>(s.vertices[0].size());
    Mat E(n, n);
    for (int i = 0; i < n; ++i) E.col(i) = s.vertices[static_cast<std::size_t>(i) + 1] - s.vertices[0];
    return std::abs(E.determinant()) / factorial(n);
}

void validate_simplex(const Simplex& s, int n) {
    if (static_cast<int>(s.vertices.size()) != n + 1) throw InvalidArgument("simplex: needs N+1 vertices");
    for (const auto& v : s.vertices) require_dim(v, n, "simplex");
    if (simplex_volume(s) <= 1e-14) throw InvalidArgument("simplex: vertices are affinely dependent");
}

}  // namespace

ConvexCone::ConvexCone(int dim, int k, std::vector<Vec> normals) : dim_(dim), k_(k), normals_(std::move(normals)) {
    if (dim < 2 || dim > kMaxDim) throw DimensionError("cone: dimension out of range");
    if (k < 0 || k > dim) throw InvalidArgument("cone: k must lie in [0, N]");
    const int m = dim - k;
    if (m == 0) {
        if (!normals_.empty()) throw InvalidArgument("cone: k = N admits no facet normals");
        return;
    }
    if (normals_.empty()) throw InvalidArgument("cone: k < N requires facet normals");
    Mat A(static_cast<int>(normals_.size()), m);
    for (std::size_t j = 0; j < normals_.size(); ++j) {
        require_dim(normals_[j], m, "cone normal");
        double nn = normals_[j].norm();
        if (!(nn > 0.0) || !std::isfinite(nn)) throw InvalidArgument("cone: facet normal must be nonzero");
        normals_[j] /= nn;
        A.row(static_cast<int>(j)) = normals_[j].transpose();
    }
    // Pointed iff the normals span R^{N-k}; otherwise C~ contains a line.
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() != m) throw InvalidArgument("cone: facet normals must span R^(N-k) (pointed cone)");
    Vec probe = Vec::Zero(m);
    for (const auto& n : normals_) probe -= n;
    auto interior = [&](const Vec& y) {
        for (const auto& n : normals_) {
            if (n.dot(y) >= -1e-9) return false;
        }
        return true;
    };
    bool ok = probe.norm() > 0 && interior(probe.normalized());
    if (!ok && m > 1) {
        Rng rng(0xc0feULL);
        for (int i = 0; i < 4096 && !ok; ++i) ok = interior(rng.unit_vector(m));
    }
    if (!ok) throw InvalidArgument("cone: cross-section has empty interior");
}

ConvexCone ConvexCone::full_space(int dim) { return ConvexCone(dim, dim, {}); }

ConvexCone ConvexCone::half_space(int dim) { return orthant(dim, 1); }

ConvexCone ConvexCone::orthant(int dim, int m) {
    if (m < 1 || m > dim) throw InvalidArgument("cone: orthant needs 1 <= m <= N");
    std::vector<Vec> normals;
    for (int i = 0; i < m; ++i) {
        Vec n = Vec::Zero(m);
        n[i] = -1.0;
        normals.push_back(n);
    }
    return ConvexCone(dim, dim - m, std::move(normals));
}

Vec ConvexCone::full_normal(int j) const {
    Vec n = Vec::Zero(dim_);
    n.tail(dim_ - k_) = normals_.at(static_cast<std::size_t>(j));
    return n;
}

double ConvexCone::max_facet_value(const Vec& x) const {
    require_dim(x, dim_, "cone");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& n : normals_) m = std::max(m, n.dot(x.tail(dim_ - k_)));
    return m;
}

bool ConvexCone::in_line_factor(const Vec& x, double tol) const {
    require_dim(x, dim_, "cone");
    return k_ == dim_ || x.tail(dim_ - k_).cwiseAbs().maxCoeff() <= tol * (1.0 + x.norm());
}

double ConvexCone::exit_time(const Vec& x0, const Vec& w) const {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& n : normals_) {
        double dn = n.dot(w.tail(dim_ - k_));
        if (dn > 0.0) t = std::min(t, std::max(0.0, -n.dot(x0.tail(dim_ - k_)) / dn));
    }
    return t;
}

Vec ConvexCone::facet_sample(int j, Rng& rng, double margin) const {
    const int m = dim_ - k_;
    const Vec& nj = normals_.at(static_cast<std::size_t>(j));
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vec y = rng.normal_vector(m);
        y -= y.dot(nj) * nj;
        double yn = y.norm();
        if (m > 1) {
            if (yn < 1e-12) continue;
            y /= yn;
        }
        bool ok = true;
        for (std::size_t i = 0; i < normals_.size(); ++i) {
            if (static_cast<int>(i) == j) continue;
            if (normals_[i].dot(y) > -margin) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Vec x(dim_);
        for (int i = 0; i < k_; ++i) x[i] = rng.normal();
        x.tail(m) = y;
        return x;
    }
    throw StratumError("cone: could not sample facet away from lower strata");
}

std::vector<double> ConvexCone::circle_breaks() const {
    std::vector<double> out;
    if (dim_ != 2) return out;
    for (int j = 0; j < facet_count(); ++j) {
        Vec n = full_normal(j);
        double a = std::atan2(n[1], n[0]);
        out.push_back(a + 0.5 * std::numbers::pi);
        out.push_back(a - 0.5 * std::numbers::pi);
    }
    return out;
}

bool ConvexCone::operator==(const ConvexCone& o) const {
    if (dim_ != o.dim_ || k_ != o.k_ || normals_.size() != o.normals_.size()) return false;
    for (std::size_t j = 0; j < normals_.size(); ++j) {
        if ((normals_[j] - o.normals_[j]).norm() > 1e-15) return false;
    }
    return true;
}

Placement cone_contains(const ConvexCone& C, const Vec& x, double tol) {
    double m = C.max_facet_value(x);
    if (m < -tol) return Placement::inside;
    if (m > tol) return Placement::outside;
    return Placement::boundary;
}

Vec cone_normal(const ConvexCone& C, const Vec& x, double tol) {
    if (cone_contains(C, x, tol) != Placement::boundary) {
        throw PlacementError("cone_normal: point is not on the cone boundary");
    }
    int active = -1, count = 0;
    for (int j = 0; j < C.facet_count(); ++j) {
        if (std::abs(C.full_normal(j).dot(x)) <= tol) {
            active = j;
            ++count;
        }
    }
    if (count != 1) throw StratumError("cone_normal: point lies on an edge or vertex of the cone");
    return C.full_normal(active);
}

WulffCap::WulffCap(Gauge g, double radius, Vec center, ConvexCone c)
    : gauge(std::move(g)), R(radius), x0(std::move(center)), cone(std::move(c)) {
    if (gauge.dim() != cone.dim()) throw DimensionError("wulff cap: gauge and cone dimensions differ");
    require_dim(x0, gauge.dim(), "wulff cap center");
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("wulff cap: radius must be positive");
    if (!in_closed(cone, x0)) throw PlacementError("wulff cap: center must lie in the closed cone");
}

bool WulffCap::contains(const Vec& x) const {
    return dual_hat_eval(gauge, Vec(x - x0)).value < R && cone.max_facet_value(x) < 0.0;
}

Estimate wulff_cap_measure(const WulffCap& cap, const QuadratureSpec& quad) {
    Estimate e = cap_integrals(cap, nullptr, quad)[0];
    enforce_target(e, quad, "wulff_cap_measure");
    return e;
}

Estimate shape_measure(const Shape& E, const ConvexCone& C, const QuadratureSpec& quad) {
    const int n = C.dim();
    if (const auto* cap = std::get_if<WulffCap>(&E)) {
        if (!(cap->cone == C)) throw InvalidArgument("shape_measure: cap cone differs from C");
        return wulff_cap_measure(*cap, quad);
    }
    if (const auto* b = std::get_if<Box>(&E)) {
        validate_box(*b, n);
        double vol = (b->hi - b->lo).prod();
        auto verts = box_vertices(*b, -1, false);
        if (std::all_of(verts.begin(), verts.end(), [&](const Vec& v) { return in_closed(C, v); })) return {vol, 0.0};
        Estimate f = open_fraction(
            C,
            [&](Rng& rng) {
                Vec p(n);
                for (int i = 0; i < n; ++i) p[i] = rng.uniform(b->lo[i], b->hi[i]);
                return p;
            },
            quad, 0x900dULL);
        return {vol * f.value, vol * f.err};
    }
    const auto& s = std::get<Simplex>(E);
    validate_simplex(s, n);
    double vol = simplex_volume(s);
    if (std::all_of(s.vertices.begin(), s.vertices.end(), [&](const Vec& v) { return in_closed(C, v); })) {
        return {vol, 0.0};
    }
    Estimate f = open_fraction(C, [&](Rng& rng) { return simplex_point(s.vertices, rng); }, quad, 0x900dULL);
    return {vol * f.value, vol * f.err};
}

Estimate anisotropic_perimeter(const Shape& E, const ConvexCone& C, const Gauge& g, const QuadratureSpec& quad) {
    const int n = C.dim();
    if (g.dim() != n) throw DimensionError("anisotropic_perimeter: gauge and cone dimensions differ");
    if (const auto* cap = std::get_if<WulffCap>(&E)) {
        if (!(cap->cone == C)) throw InvalidArgument("anisotropic_perimeter: cap cone differs from C");
        Estimate e = cap_integrals(*cap, &g, quad)[1];
        enforce_target(e, quad, "anisotropic_perimeter");
        return e;
    }
    double total = 0.0, var = 0.0;
    std::uint64_t stream = 0x9e71ULL;
    if (const auto* b = std::get_if<Box>(&E)) {
        validate_box(*b, n);
        Vec len = b->hi - b->lo;
        for (int i = 0; i < n; ++i) {
            for (bool upper : {false, true}) {
                Vec nu = Vec::Zero(n);
                nu[i] = upper ? 1.0 : -1.0;
                double area = len.prod() / len[i];
                auto verts = box_vertices(*b, i, upper);
                auto sample = [&, i, upper](Rng& rng) {
                    Vec p(n);
                    for (int d = 0; d < n; ++d) p[d] = rng.uniform(b->lo[d], b->hi[d]);
                    p[i] = upper ? b->hi[i] : b->lo[i];
                    return p;
                };
                Estimate t = facet_term(C, verts, area, g.value(nu), sample, quad, ++stream);
                total += t.value;
                var += t.err * t.err;
            }
        }
        return {total, std::sqrt(var)};
    }
    const auto& s = std::get<Simplex>(E);
    validate_simplex(s, n);
    for (int omit = 0; omit <= n; ++omit) {
        std::vector<Vec> face;
        for (int i = 0; i <= n; ++i) {
            if (i != omit) face.push_back(s.vertices[static_cast<std::size_t>(i)]);
        }
        Mat E2(n, n - 1);
        for (int i = 1; i < n; ++i) E2.col(i - 1) = face[static_cast<std::size_t>(i)] - face[0];
        Eigen::FullPivLU<Mat> lu(E2.transpose());
        Vec nu = lu.kernel().col(0);
        nu.normalize();
        if (nu.dot(s.vertices[static_cast<std::size_t>(omit)] - face[0]) > 0.0) nu = -nu;
        auto sample = [&face](Rng& rng) { return simplex_point(face, rng); };
        Estimate t = facet_term(C, face, facet_volume(face), g.value(nu), sample, quad, ++stream);
        total += t.value;
        var += t.err * t.err;
    }
    return {total, std::sqrt(var)};
}

IsoperimetricResult isoperimetric_check(const Shape& E, const ConvexCone& C, const Gauge& g, const QuadratureSpec& quad,
                                        double equality_tol) {
    const int n = C.dim();
    Estimate P = anisotropic_perimeter(E, C, g, quad);
    Estimate V = shape_measure(E, C, quad);
    if (!(V.value > 0.0)) throw InvalidArgument("isoperimetric_check: set has zero measure in the cone");
    const double expo = (n - 1.0) / n;
    double quotient = P.value / std::pow(V.value, expo);
    WulffCap W(g.reflected(), 1.0, Vec::Zero(n), C);
    Estimate VW = wulff_cap_measure(W, quad);
    double wq = n * std::pow(VW.value, 1.0 / n);
    double rel = std::hypot(P.err / P.value, expo * V.err / V.value);
    double err = std::hypot(quotient * rel, wq * VW.err / (n * VW.value));
    return {quotient, wq, std::abs(quotient - wq) / wq < equality_tol, err};
}

WulffIdentity wulff_perimeter_identity(const ConvexCone& C, const Gauge& g, const QuadratureSpec& quad) {
    const int n = C.dim();
    WulffCap W(g.reflected(), 1.0, Vec::Zero(n), C);
    auto est = cap_integrals(W, &g, quad);
    return {est[1], {n * est[0].value, n * est[0].err}};
}

}  // namespace flv
