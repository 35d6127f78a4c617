#pragma once

#include "flv/types.hpp"

#include <cstdint>
#include <random>

namespace flv {

/// splitmix64 step; used to derive independent per-batch seeds from a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// std::mt19937_64 output is fixed by the standard, but the std distributions are
// not, so uniforms and normals are built here to keep reports portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    double uniform();
    double uniform(double lo, double hi);
    double normal();
    Vec normal_vector(int dim);
    Vec unit_vector(int dim);
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace flv
