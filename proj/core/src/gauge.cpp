#include "flv/gauge.hpp"

#include "flv/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace flv {

namespace {

// r^e for r >= 0, avoiding std::pow for the exponents that the Hoelder pairs
// q in {3/2, 2, 3, 4} and their conjugates produce.
double power(double r, double e) {
    auto is = [e](double v) { return std::abs(e - v) < 1e-13; };
    if (is(1.0)) return r;
    if (is(2.0)) return r * r;
    if (is(0.5)) return std::sqrt(r);
    if (is(3.0)) return r * r * r;
    if (is(4.0)) return (r * r) * (r * r);
    if (is(1.5)) return r * std::sqrt(r);
    if (is(0.25)) return std::sqrt(std::sqrt(r));
    if (is(0.75)) return std::sqrt(r) * std::sqrt(std::sqrt(r));
    if (is(1.0 / 3.0)) return std::cbrt(r);
    if (is(2.0 / 3.0)) return std::cbrt(r * r);
    if (is(4.0 / 3.0)) return r * std::cbrt(r);
    return std::pow(r, e);
}

double pnorm_value(const Vec& y, double q) {
    double m = y.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < y.size(); ++i) s += power(std::abs(y[i]) / m, q);
    return m * power(s, 1.0 / q);
}

Vec pnorm_gradient(const Vec& y, double q) {
    double h = pnorm_value(y, q);
    Vec g(y.size());
    for (int i = 0; i < y.size(); ++i) {
        double r = std::abs(y[i]) / h;
        g[i] = (y[i] > 0 ? 1.0 : (y[i] < 0 ? -1.0 : 0.0)) * power(r, q - 1.0);
    }
    return g;
}

void check_q(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("gauge: exponent q must lie in (1, inf)");
}

void check_dim(int dim) {
    if (dim < 2 || dim > kMaxDim) throw DimensionError("gauge: dimension must lie in [2, " + std::to_string(kMaxDim) + "]");
}

// Guard for ||.||_q with q < 2: the Hessian blows up on coordinate hyperplanes.
void check_regular(const Vec& y, double q) {
    if (q >= 2.0) return;
    double m = y.cwiseAbs().maxCoeff();
    for (int i = 0; i < y.size(); ++i) {
        if (std::abs(y[i]) < kRegularityThreshold * m) {
            throw RegularityError("gauge: argument lies on coordinate hyperplane " + std::to_string(i) +
                                      " where the q-norm is not twice differentiable",
                                  i);
        }
    }
}

Vec mapped_argument(const Gauge& g, const Vec& xi, double& q) {
    if (const auto* p = std::get_if<PNorm>(&g.family())) {
        q = p->q;
        return xi;
    }
    if (const auto* l = std::get_if<LinearImage>(&g.family())) {
        q = l->q;
        return l->M * xi;
    }
    q = 2.0;
    return xi;
}

}  // namespace

Gauge Gauge::euclidean(int dim) {
    check_dim(dim);
    return Gauge(Euclidean{}, dim);
}

Gauge Gauge::pnorm(int dim, double q) {
    check_dim(dim);
    check_q(q);
    return Gauge(PNorm{q}, dim);
}

Gauge Gauge::linear_image(const Mat& M, double q) {
    check_dim(static_cast<int>(M.rows()));
    if (M.rows() != M.cols()) throw DimensionError("gauge: linear image matrix must be square");
    check_q(q);
    if (!M.allFinite()) throw InvalidArgument("gauge: linear image matrix has non-finite entries");
    Eigen::JacobiSVD<Mat> svd(M);
    const auto& s = svd.singularValues();
    if (s[s.size() - 1] <= 1e-12 * s[0]) throw InvalidArgument("gauge: linear image matrix is singular");
    return Gauge(LinearImage{M, q}, static_cast<int>(M.rows()));
}

Gauge Gauge::ellipsoid(const Mat& A) {
    check_dim(static_cast<int>(A.rows()));
    if (A.rows() != A.cols()) throw DimensionError("gauge: ellipsoid matrix must be square");
    if (!A.allFinite()) throw InvalidArgument("gauge: ellipsoid matrix has non-finite entries");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
        throw InvalidArgument("gauge: ellipsoid matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    if (es.eigenvalues()[0] <= 0.0) throw InvalidArgument("gauge: ellipsoid matrix must be positive definite");
    Mat sym = 0.5 * (A + A.transpose());
    return Gauge(Ellipsoid{sym}, static_cast<int>(A.rows()));
}

Gauge Gauge::drifted(const Vec& b) {
    check_dim(static_cast<int>(b.size()));
    if (!b.allFinite() || !(b.norm() < 1.0)) throw InvalidArgument("gauge: drift vector must have norm < 1");
    return Gauge(Drifted{b}, static_cast<int>(b.size()));
}

std::string Gauge::name() const {
    std::ostringstream os;
    switch (kind()) {
        case GaugeKind::euclidean: os << "euclidean"; break;
        case GaugeKind::pnorm: os << "pnorm(q=" << std::get<PNorm>(family_).q << ")"; break;
        case GaugeKind::linear_image: os << "linear_image(q=" << std::get<LinearImage>(family_).q << ")"; break;
        case GaugeKind::ellipsoid: os << "ellipsoid"; break;
        case GaugeKind::drifted: os << "drifted(|b|=" << std::get<Drifted>(family_).b.norm() << ")"; break;
    }
    os << "/N=" << dim_;
    return os.str();
}

double Gauge::value(const Vec& xi) const {
    switch (kind()) {
        case GaugeKind::euclidean: return xi.norm();
        case GaugeKind::pnorm: return pnorm_value(xi, std::get<PNorm>(family_).q);
        case GaugeKind::linear_image: {
            const auto& l = std::get<LinearImage>(family_);
            return pnorm_value(l.M * xi, l.q);
        }
        case GaugeKind::ellipsoid: {
            double s = xi.dot(std::get<Ellipsoid>(family_).A * xi);
            return std::sqrt(std::max(s, 0.0));
        }
        case GaugeKind::drifted: return xi.norm() + std::get<Drifted>(family_).b.dot(xi);
    }
    return 0.0;
}

Vec Gauge::gradient(const Vec& xi) const {
    switch (kind()) {
        case GaugeKind::euclidean: return xi / xi.norm();
        case GaugeKind::pnorm: return pnorm_gradient(xi, std::get<PNorm>(family_).q);
        case GaugeKind::linear_image: {
            const auto& l = std::get<LinearImage>(family_);
            return l.M.transpose() * pnorm_gradient(l.M * xi, l.q);
        }
        case GaugeKind::ellipsoid: {
            Vec ax = std::get<Ellipsoid>(family_).A * xi;
            return ax / std::sqrt(xi.dot(ax));
        }
        case GaugeKind::drifted: return Vec(xi / xi.norm() + std::get<Drifted>(family_).b);
    }
    return xi;
}

Gauge Gauge::reflected() const {
    if (const auto* d = std::get_if<Drifted>(&family_)) return Gauge(Drifted{-d->b}, dim_);
    return *this;
}

double eval_gauge(const Gauge& g, const Vec& xi) {
    require_dim(xi, g.dim(), "eval_gauge");
    return g.value(xi);
}

Vec grad_gauge(const Gauge& g, const Vec& xi) {
    require_dim(xi, g.dim(), "grad_gauge");
    if (xi.isZero(0.0)) throw SingularPointError("grad_gauge: gradient undefined at the origin");
    double q = 2.0;
    Vec y = mapped_argument(g, xi, q);
    check_regular(y, q);
    return g.gradient(xi);
}

Vec a_field(const Gauge& g, int N, const Vec& xi) {
    require_dim(xi, g.dim(), "a_field");
    if (N < 2) throw InvalidArgument("a_field: N must be at least 2");
    if (xi.isZero(0.0)) return Vec::Zero(xi.size());
    Vec grad = grad_gauge(g, xi);
    return std::pow(g.value(xi), N - 1) * grad;
}

namespace {

// Projected gradient ascent of sign * H on the unit sphere with backtracking.
Vec polish_on_sphere(const Gauge& g, Vec w, double sign) {
    double f = sign * g.value(w);
    double step = 0.1;
    for (int it = 0; it < 400 && step > 1e-15; ++it) {
        Vec grad = sign * g.gradient(w);
        Vec tang = grad - grad.dot(w) * w;
        if (tang.norm() < 1e-14) break;
        bool moved = false;
        while (step > 1e-15) {
            Vec cand = (w + step * tang).normalized();
            double fc = sign * g.value(cand);
            if (fc > f) {
                w = cand;
                f = fc;
                step *= 2.0;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return w;
}

}  // namespace

SphereExtrema sphere_extrema(const Gauge& g, int budget) {
    const int n = g.dim();
    if (budget < 2 * n) throw InvalidArgument("sphere_extrema: budget must be at least 2N");
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(budget));
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = 1.0;
        pts.push_back(e);
        pts.push_back(-e);
    }
    const int rest = budget - 2 * n;
    if (n == 2) {
        for (int i = 0; i < rest; ++i) {
            double th = 2.0 * std::numbers::pi * (i + 0.5) / rest;
            Vec w(2);
            w << std::cos(th), std::sin(th);
            pts.push_back(w);
        }
    } else {
        Rng rng(0x5eedULL);
        for (int i = 0; i < rest; ++i) pts.push_back(rng.unit_vector(n));
    }
    std::size_t imin = 0, imax = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double v = g.value(pts[i]);
        if (v < lo) { lo = v; imin = i; }
        if (v > hi) { hi = v; imax = i; }
    }
    lo = std::min(lo, g.value(polish_on_sphere(g, pts[imin], -1.0)));
    hi = std::max(hi, g.value(polish_on_sphere(g, pts[imax], 1.0)));
    return {lo, hi};
}

EllipticityEstimate check_ellipticity(const Gauge& g, int N, int samples, std::uint64_t seed) {
    if (samples < 100) throw InvalidArgument("check_ellipticity: at least 100 samples required");
    if (N != g.dim()) throw DimensionError("check_ellipticity: N must match the gauge dimension");
    Rng rng(seed);
    const int max_retries = 64;

    auto draw = [&]() -> Vec {
        for (int attempt = 0; attempt < max_retries; ++attempt) {
            Vec v = std::exp(rng.uniform(-2.0, 2.0)) * rng.unit_vector(N);
            try {
                grad_gauge(g, v);
                return v;
            } catch (const RegularityError&) {
            }
        }
        Vec v = rng.unit_vector(N);
        grad_gauge(g, v);  // rethrows the regularity error
        return v;
    };

    EllipticityEstimate est{std::numeric_limits<double>::infinity(), 0.0, 0.0, samples};
    for (int s = 0; s < samples; ++s) {
        Vec x1 = draw();
        Vec x2 = draw();
        Vec d = x1 - x2;
        double dn = d.norm();
        if (dn == 0.0) continue;
        double w = std::pow(x1.norm() + x2.norm(), N - 2);
        Vec da = a_field(g, N, x1) - a_field(g, N, x2);
        est.c1_hat = std::min(est.c1_hat, da.dot(d) / (w * dn * dn));
        est.c2_hat = std::max(est.c2_hat, da.norm() / (w * dn));

        // D^2(H^N) = N Da, by central differences of the analytic a-field.
        double xn = x1.norm();
        double h = 1e-5 * xn;
        Mat hess(N, N);
        for (int j = 0; j < N; ++j) {
            Vec p = x1, m = x1;
            p[j] += h;
            m[j] -= h;
            hess.col(j) = N * (a_field(g, N, p) - a_field(g, N, m)) / (2.0 * h);
        }
        hess = 0.5 * (hess + hess.transpose()).eval();
        double scale = std::pow(xn, N - 2);
        Eigen::SelfAdjointEigenSolver<Mat> es(hess);
        double lmin = es.eigenvalues()[0] / scale;
        double lsum = hess.cwiseAbs().sum() / scale;
        double need = std::max(lsum, lmin > 0 ? 1.0 / lmin : std::numeric_limits<double>::infinity());
        est.lambda_ell_hat = std::max(est.lambda_ell_hat, need);
    }
    return est;
}

}  // namespace flv
