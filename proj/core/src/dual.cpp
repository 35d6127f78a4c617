#include "flv/dual.hpp"

#include "flv/rng.hpp"

#include <boost/math/tools/roots.hpp>

#include <Eigen/Cholesky>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <algorithm>
#include <numbers>
#include <vector>

namespace flv {

namespace {

constexpr int kCoarseIterations = 6;
constexpr int kPolishIterations = 60;
constexpr double kStationarity = 1e-12;
constexpr double kFailResidual = 1e-6;
constexpr double kDistinctDistance = 1e-4;
constexpr double kTieGap = 1e-10;

int random_start_count(int n) { return std::max(8, 4 * n); }

// Fixed random start directions per dimension, drawn once from a constant seed.
const std::vector<Vec>& random_starts(int n) {
    static const auto table = [] {
        std::array<std::vector<Vec>, kMaxDim + 1> t;
        for (int d = 2; d <= kMaxDim; ++d) {
            Rng rng(derive_seed(0xd0a1ULL, static_cast<std::uint64_t>(d)));
            for (int i = 0; i < random_start_count(d); ++i) t[d].push_back(rng.unit_vector(d));
        }
        return t;
    }();
    return table[n];
}

// F(w) = <xhat, w> / H(w) on the unit sphere; F is 0-homogeneous so its ambient
// gradient is already tangent.
struct Objective {
    const Gauge& g;
    const Vec& xhat;
    mutable int evals = 0;

    double value(const Vec& w) const {
        ++evals;
        return xhat.dot(w) / g.value(w);
    }

    Vec grad(const Vec& w) const {
        ++evals;
        double h = g.value(w);
        return xhat / h - (xhat.dot(w) / (h * h)) * g.gradient(w);
    }
};

Vec tangent(const Vec& v, const Vec& w) { return v - v.dot(w) * w; }

Vec along(const Vec& w, const Vec& u, double t) { return std::cos(t) * w + std::sin(t) * u; }

Vec coarse_ascent(const Objective& obj, Vec w) {
    double f = obj.value(w);
    for (int it = 0; it < kCoarseIterations; ++it) {
        Vec gt = tangent(obj.grad(w), w);
        double gn2 = gt.squaredNorm();
        if (gn2 < 1e-24) break;
        double s = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt, s *= 0.5) {
            Vec cand = (w + s * gt).normalized();
            double fc = obj.value(cand);
            if (fc >= f + 1e-4 * s * gn2) {
                w = cand;
                f = fc;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return w;
}

// Orthonormal basis of the tangent space at w.
std::vector<Vec> tangent_basis(const Vec& w) {
    const int n = static_cast<int>(w.size());
    std::vector<Vec> basis;
    for (int i = 0; i < n && static_cast<int>(basis.size()) < n - 1; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = 1.0;
        Vec v = e - e.dot(w) * w;
        for (const auto& b : basis) v -= v.dot(b) * b;
        double vn = v.norm();
        if (vn > 1e-3) basis.push_back(v / vn);
    }
    return basis;
}

// Newton direction from a finite-difference Riemannian Hessian; empty when the
// Hessian is not negative definite.
std::optional<Vec> newton_direction(const Objective& obj, const Vec& w, const Vec& gt) {
    auto basis = tangent_basis(w);
    const int m = static_cast<int>(basis.size());
    Mat hess(m, m);
    Vec gr(m);
    for (int i = 0; i < m; ++i) gr[i] = gt.dot(basis[i]);
    const double h = 1e-6;
    for (int j = 0; j < m; ++j) {
        Vec gp = obj.grad(along(w, basis[j], h));
        Vec gm = obj.grad(along(w, basis[j], -h));
        for (int i = 0; i < m; ++i) hess(i, j) = (gp - gm).dot(basis[i]) / (2.0 * h);
    }
    Mat neg = -0.5 * (hess + hess.transpose());
    Eigen::LLT<Mat> llt(neg);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Vec step = llt.solve(gr);
    Vec d = Vec::Zero(w.size());
    for (int i = 0; i < m; ++i) d += step[i] * basis[i];
    if (!d.allFinite() || d.dot(gt) <= 0.0) return std::nullopt;
    return d;
}

struct Polished {
    Vec w;
    double f;
    double residual;
    int iterations;
};

Polished polish(const Objective& obj, Vec w) {
    const int n = static_cast<int>(w.size());
    double f = obj.value(w);
    double res = 0.0;
    int it = 0;
    for (; it < kPolishIterations; ++it) {
        Vec gt = tangent(obj.grad(w), w);
        res = gt.norm();
        if (res <= kStationarity) break;

        Vec d = gt;
        double guess = res;
        if (n > 2) {
            if (auto nd = newton_direction(obj, w, gt)) {
                d = *nd;
                guess = 1.5 * d.norm();
            }
        }
        Vec u = tangent(d, w).normalized();
        auto dpsi = [&](double t) {
            Vec wt = along(w, u, t);
            Vec dw = -std::sin(t) * w + std::cos(t) * u;
            return obj.grad(wt).dot(dw);
        };

        double lo = 0.0, flo = dpsi(0.0);
        if (!(flo > 0.0)) break;
        double hi = std::min(std::max(guess, 1e-14), 1.0);
        double fhi = dpsi(hi);
        while (fhi > 0.0 && hi < 1.5) {
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = dpsi(hi);
        }
        double t = hi;
        if (fhi < 0.0) {
            boost::uintmax_t max_iter = 50;
            auto r = boost::math::tools::toms748_solve(dpsi, lo, hi, flo, fhi,
                                                       boost::math::tools::eps_tolerance<double>(52), max_iter);
            t = 0.5 * (r.first + r.second);
        }
        Vec cand = along(w, u, t).normalized();
        double fc = obj.value(cand);
        if (fc < f - 1e-15 * std::abs(f)) break;
        bool stalled = (w - cand).norm() < 1e-16;
        w = cand;
        f = fc;
        if (stalled) {
            res = tangent(obj.grad(w), w).norm();
            break;
        }
    }
    if (it == kPolishIterations) res = tangent(obj.grad(w), w).norm();
    return {w, f, res, it};
}

}  // namespace

DualEvaluation dual_eval(const Gauge& g, const Vec& x) {
    require_dim(x, g.dim(), "dual_eval");
    DualEvaluation out;
    const double xn = x.norm();
    if (xn == 0.0) return out;
    const int n = g.dim();
    const Vec xhat = x / xn;
    Objective obj{g, xhat};

    std::vector<Vec> starts;
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = 1.0;
        starts.push_back(e);
        starts.push_back(-e);
    }
    for (const auto& s : random_starts(n)) starts.push_back(s);

    std::vector<Vec> ends;
    std::vector<double> vals;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        Vec w = coarse_ascent(obj, s);
        double f = obj.value(w);
        ends.push_back(w);
        vals.push_back(f);
        best = std::max(best, f);
    }

    // Polish the best coarse endpoint first; another endpoint is polished only if
    // it did not land in the basin of an already polished maximizer.
    std::vector<std::size_t> order;
    const double keep = best - 1e-2 * std::abs(best);
    for (std::size_t i = 0; i < ends.size(); ++i) {
        if (vals[i] >= keep) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    std::vector<Polished> polished;
    std::vector<std::size_t> origin;
    for (std::size_t i : order) {
        bool seen = false;
        for (const auto& q : polished) {
            if ((q.w - ends[i]).norm() < 0.1) {
                seen = true;
                break;
            }
        }
        if (seen) continue;
        polished.push_back(polish(obj, ends[i]));
        origin.push_back(i);
    }

    // Ties go to the lowest start index so the result does not depend on polish order.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < polished.size(); ++i) {
        if (polished[i].f > polished[arg].f || (polished[i].f == polished[arg].f && origin[i] < origin[arg])) arg = i;
    }
    const Polished& p = polished[arg];
    for (std::size_t i = 0; i < polished.size(); ++i) {
        if (i == arg) continue;
        if ((polished[i].w - p.w).norm() > kDistinctDistance &&
            std::abs(polished[i].f - p.f) < kTieGap * (1.0 + std::abs(p.f))) {
            out.ambiguous = true;
        }
    }

    int iters = 0;
    for (const auto& q : polished) iters += q.iterations;
    out.iterations = static_cast<int>(starts.size()) * kCoarseIterations + iters;
    out.residual = p.residual;
    if (p.residual > kFailResidual) {
        throw ConvergenceError("dual_eval: polish did not reach stationarity", xn * p.f, p.residual);
    }
    Vec xi = p.w / g.value(p.w);
    out.maximizer = xi;
    out.value = x.dot(xi);
    return out;
}

DualEvaluation dual_hat_eval(const Gauge& g, const Vec& x) {
    require_dim(x, g.dim(), "dual_hat_eval");
    return dual_eval(g, Vec(-x));
}

Vec dual_grad(const Gauge& g, const Vec& x) {
    require_dim(x, g.dim(), "dual_grad");
    if (x.isZero(0.0)) throw SingularPointError("dual_grad: gradient undefined at the origin");
    DualEvaluation d = dual_eval(g, x);
    if (d.ambiguous) throw AmbiguityError("dual_grad: maximizer is not unique");
    return *d.maximizer;
}

Vec dual_hat_grad(const Gauge& g, const Vec& x) {
    require_dim(x, g.dim(), "dual_hat_grad");
    return -dual_grad(g, Vec(-x));
}

std::optional<Gauge> closed_form_dual(const Gauge& g) {
    switch (g.kind()) {
        case GaugeKind::euclidean: return Gauge::euclidean(g.dim());
        case GaugeKind::pnorm: {
            double q = std::get<PNorm>(g.family()).q;
            return Gauge::pnorm(g.dim(), q / (q - 1.0));
        }
        case GaugeKind::ellipsoid: {
            Mat inv = std::get<Ellipsoid>(g.family()).A.inverse();
            return Gauge::ellipsoid(Mat(0.5 * (inv + inv.transpose())));
        }
        case GaugeKind::linear_image: {
            const auto& l = std::get<LinearImage>(g.family());
            return Gauge::linear_image(Mat(l.M.inverse().transpose()), l.q / (l.q - 1.0));
        }
        case GaugeKind::drifted: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace flv
