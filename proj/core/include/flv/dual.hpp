#pragma once

#include "flv/gauge.hpp"

#include <optional>

namespace flv {

struct DualEvaluation {
    double value = 0.0;
    /// H-unit maximizer; empty at x = 0 where every direction attains the sup.
    std::optional<Vec> maximizer;
    int iterations = 0;
    /// Norm of the tangential gradient of <x/|x|, w>/H(w) at the final point.
    double residual = 0.0;
    /// Two distinct maximizers with equal value were found.
    bool ambiguous = false;
};

/// H_0(x) = sup_{H(xi)=1} <x, xi>, maximized over the Euclidean sphere.
DualEvaluation dual_eval(const Gauge& g, const Vec& x);

/// H_0(-x).
DualEvaluation dual_hat_eval(const Gauge& g, const Vec& x);

/// Gradient of H_0 at x != 0, which is the maximizer itself.
Vec dual_grad(const Gauge& g, const Vec& x);

/// Gradient of x -> H_0(-x), i.e. minus the maximizer at -x.
Vec dual_hat_grad(const Gauge& g, const Vec& x);

/// Dual gauge in closed form for the families where one is known.
std::optional<Gauge> closed_form_dual(const Gauge& g);

}  // namespace flv
