#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace flv {

// Every object in the library lives in R^N with N small; the fixed upper bound
// keeps vectors on the stack in the hot quadrature loops.
inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Evaluation at the origin of a quantity only defined away from it.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Gradient requested at a point where the gauge is not C^2.
class RegularityError : public Error {
public:
    RegularityError(const std::string& what, int coordinate)
        : Error(what), coordinate_(coordinate) {}
    int coordinate() const noexcept { return coordinate_; }

private:
    int coordinate_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value, double residual)
        : Error(what), best_value_(best_value), residual_(residual) {}
    double best_value() const noexcept { return best_value_; }
    double residual() const noexcept { return residual_; }

private:
    double best_value_;
    double residual_;
};

class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Point on an edge or vertex of a cone, where no single facet normal exists.
class StratumError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

/// Stencil or center placed where the operation is not defined.
class PlacementError : public Error {
public:
    using Error::Error;
};

class DegeneracyError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class EmptyLevelError : public Error {
public:
    using Error::Error;
};

/// A test function violates the vanishing hypothesis of the Poincare inequality.
class HypothesisError : public Error {
public:
    using Error::Error;
};

inline void require_dim(const Vec& v, int dim, const char* what) {
    if (v.size() != dim) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                             ", got " + std::to_string(v.size()));
    }
}

}  // namespace flv
