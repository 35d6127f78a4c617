#include "flv/rng.hpp"

#include <cmath>
#include <numbers>

namespace flv {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(derive_seed(seed, 0)) {}

double Rng::uniform() {
    // 53 random mantissa bits, strictly inside (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

Vec Rng::normal_vector(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
}

Vec Rng::unit_vector(int dim) {
    for (;;) {
        Vec v = normal_vector(dim);
        const double n = v.norm();
        if (n > 1e-12) return v / n;
    }
}

}  // namespace flv
