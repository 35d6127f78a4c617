#pragma once

#include "flv/types.hpp"

#include <cmath>
#include <initializer_list>

namespace flv::test {

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline Mat diag(std::initializer_list<double> xs) {
    const Vec d = vec(xs);
    return d.asDiagonal();
}

inline Mat mat2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace flv::test
