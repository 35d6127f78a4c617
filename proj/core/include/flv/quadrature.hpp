#pragma once

#include "flv/rng.hpp"
#include "flv/types.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace flv {

enum class QuadMethod { monte_carlo, tensor_polar };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::tensor_polar;
    /// Samples (Monte Carlo) or approximate node count (tensor rule).
    int budget = 4096;
    std::uint64_t seed = 1;
    double target_rel_err = 1e-3;
    /// Radial draws of the direct Monte Carlo mass estimator (2 per direction) used as a cross-check.
    int cross_check_samples = 200000;
};

/// Value with a one-sigma error: sample standard error (Monte Carlo) or the
/// difference between the rule and its half-resolution companion (tensor).
struct Estimate {
    double value = 0.0;
    double err = 0.0;
};

void validate(const QuadratureSpec& q);

double sphere_area(int dim);

/// Composite Gauss-Legendre rule on [a, b] with the given panel count.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    using Rule = boost::math::quadrature::gauss<double, 16>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        const double r = 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] == 0.0 ? w[i] * f(c) : w[i] * (f(c - r * x[i]) + f(c + r * x[i]));
        total += r * s;
    }
    return total;
}

namespace detail {

template <int K>
struct Moments {
    std::array<double, K> sum{};
    std::array<double, K> sq{};
    std::int64_t n = 0;

    Moments& operator+=(const Moments& o) {
        for (int k = 0; k < K; ++k) {
            sum[k] += o.sum[k];
            sq[k] += o.sq[k];
        }
        n += o.n;
        return *this;
    }
};

// Fixed-shape tree reduction so the rounding pattern does not depend on evaluation order.
template <class T>
T pairwise(std::vector<T> v) {
    if (v.empty()) return T{};
    while (v.size() > 1) {
        std::vector<T> next;
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) {
            T t = v[i];
            t += v[i + 1];
            next.push_back(t);
        }
        if (v.size() % 2) next.push_back(v.back());
        v.swap(next);
    }
    return v.front();
}

inline double fold(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

// Split [0, 2pi) at the breakpoints and assign each arc a share of the panels.
inline std::vector<std::pair<double, int>> circle_arcs(std::vector<double> breaks, int panels) {
    for (auto& b : breaks) b = fold(b);
    breaks.push_back(0.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a < 1e-12; }),
                 breaks.end());
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::pair<double, int>> arcs;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        double end = i + 1 < breaks.size() ? breaks[i + 1] : two_pi;
        int p = std::max(1, static_cast<int>(std::lround(panels * (end - breaks[i]) / two_pi)));
        arcs.emplace_back(breaks[i], p);
    }
    return arcs;
}

template <int K, class F>
std::array<double, K> circle_rule(F& f, const std::vector<double>& breaks, int panels) {
    using Rule = boost::math::quadrature::gauss<double, 16>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    auto arcs = circle_arcs(breaks, panels);
    const double two_pi = 2.0 * std::numbers::pi;
    std::array<double, K> total{};
    Vec om(2);
    auto add = [&](double th, double wt) {
        om << std::cos(th), std::sin(th);
        auto v = f(om);
        for (int k = 0; k < K; ++k) total[k] += wt * v[k];
    };
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        double start = arcs[a].first;
        double end = a + 1 < arcs.size() ? arcs[a + 1].first : two_pi;
        int p = arcs[a].second;
        double h = (end - start) / p;
        for (int j = 0; j < p; ++j) {
            double c = start + (j + 0.5) * h, r = 0.5 * h;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] == 0.0) {
                    add(c, r * w[i]);
                    continue;
                }
                add(c - r * x[i], r * w[i]);
                add(c + r * x[i], r * w[i]);
            }
        }
    }
    return total;
}

// Spherical coordinates with the polar axis along e_3; theta panels even and
// phi panels a multiple of four, so coordinate planes fall on panel edges.
template <int K, class F>
std::array<double, K> sphere3_rule(F& f, int theta_panels) {
    using Rule = boost::math::quadrature::gauss<double, 8>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    std::vector<double> nodes, weights;
    for (std::size_t i = 0; i < x.size(); ++i) {
        nodes.push_back(x[i]);
        weights.push_back(w[i]);
        if (x[i] != 0.0) {
            nodes.push_back(-x[i]);
            weights.push_back(w[i]);
        }
    }
    const double pi = std::numbers::pi;
    const int phi_panels = 2 * theta_panels;
    const double ht = pi / theta_panels, hp = 2.0 * pi / phi_panels;
    std::array<double, K> total{};
    Vec om(3);
    for (int a = 0; a < theta_panels; ++a) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double th = (a + 0.5 + 0.5 * nodes[i]) * ht;
            double wt = 0.5 * ht * weights[i] * std::sin(th);
            double st = std::sin(th), ct = std::cos(th);
            for (int b = 0; b < phi_panels; ++b) {
                for (std::size_t j = 0; j < nodes.size(); ++j) {
                    double ph = (b + 0.5 + 0.5 * nodes[j]) * hp;
                    double wp = 0.5 * hp * weights[j];
                    om << st * std::cos(ph), st * std::sin(ph), ct;
                    auto v = f(om);
                    for (int k = 0; k < K; ++k) total[k] += wt * wp * v[k];
                }
            }
        }
    }
    return total;
}

}  // namespace detail

/// Mean and standard error of a K-valued sampler over `samples` draws. Batches of
/// 1024 draws use seeds derived from `seed` by batch index and are combined by a
/// fixed pairwise tree, so the result depends only on (seed, samples).
template <int K, class F>
std::array<Estimate, K> monte_carlo(int samples, std::uint64_t seed, F&& sample) {
    constexpr int batch = 1024;
    if (samples < 2) throw QuadratureError("monte_carlo: need at least two samples");
    const int batches = (samples + batch - 1) / batch;
    std::vector<detail::Moments<K>> parts(static_cast<std::size_t>(batches));
    for (int b = 0; b < batches; ++b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        const int n = std::min(batch, samples - b * batch);
        auto& m = parts[static_cast<std::size_t>(b)];
        for (int i = 0; i < n; ++i) {
            auto v = sample(rng);
            for (int k = 0; k < K; ++k) {
                m.sum[k] += v[k];
                m.sq[k] += v[k] * v[k];
            }
        }
        m.n = n;
    }
    auto tot = detail::pairwise(std::move(parts));
    const double n = static_cast<double>(tot.n);
    std::array<Estimate, K> out{};
    for (int k = 0; k < K; ++k) {
        double mean = tot.sum[k] / n;
        double var = std::max(0.0, tot.sq[k] / n - mean * mean) * n / (n - 1.0);
        out[k] = {mean, std::sqrt(var / n)};
    }
    return out;
}

/// Integral over S^{dim-1} of a K-valued integrand f(omega) -> std::array<double, K>.
///
/// `circle_breaks` lists angles (dim = 2 only) where the integrand may have a kink
/// or jump; the tensor rule places panel edges there.
template <int K, class F>
std::array<Estimate, K> integrate_over_sphere(int dim, const QuadratureSpec& q, F&& f,
                                              const std::vector<double>& circle_breaks = {}) {
    validate(q);
    std::array<Estimate, K> out{};
    if (q.method == QuadMethod::monte_carlo) {
        const double area = sphere_area(dim);
        auto est = monte_carlo<K>(q.budget, q.seed, [&](Rng& rng) { return f(rng.unit_vector(dim)); });
        for (int k = 0; k < K; ++k) out[k] = {area * est[k].value, area * est[k].err};
        return out;
    }
    if (dim == 2) {
        int panels = std::max(8, 4 * ((q.budget / 16 + 3) / 4));
        auto fine = detail::circle_rule<K>(f, circle_breaks, panels);
        auto coarse = detail::circle_rule<K>(f, circle_breaks, panels / 2);
        for (int k = 0; k < K; ++k) out[k] = {fine[k], std::abs(fine[k] - coarse[k])};
        return out;
    }
    if (dim == 3) {
        int tp = static_cast<int>(std::sqrt(q.budget / 128.0));
        tp = std::max(4, tp + (tp % 2));
        if (tp % 4) tp += 2;  // keeps the half-resolution companion even
        auto fine = detail::sphere3_rule<K>(f, tp);
        auto coarse = detail::sphere3_rule<K>(f, tp / 2);
        for (int k = 0; k < K; ++k) out[k] = {fine[k], std::abs(fine[k] - coarse[k])};
        return out;
    }
    throw QuadratureError("integrate_over_sphere: the tensor rule supports dimensions 2 and 3 only");
}

}  // namespace flv
