#include "flv/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace flv {

void validate(const QuadratureSpec& q) {
    if (q.method == QuadMethod::monte_carlo && q.budget < 1000) {
        throw QuadratureError("quadrature: Monte Carlo budget must be at least 1000");
    }
    if (q.budget < 16) throw QuadratureError("quadrature: budget too small");
    if (!(q.target_rel_err > 0.0)) throw QuadratureError("quadrature: target_rel_err must be positive");
    if (q.cross_check_samples < 1000) throw QuadratureError("quadrature: cross_check_samples must be at least 1000");
}

double sphere_area(int dim) {
    if (dim < 1) throw DimensionError("sphere_area: dimension must be positive");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace flv
