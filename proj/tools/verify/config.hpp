#pragma once

#include "flv/cone.hpp"
#include "flv/gauge.hpp"
#include "flv/liouville.hpp"
#include "flv/quadrature.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flv::cli {

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> kSuiteOrder = {"gauge",  "dual",   "cone",     "residual",
                                                     "mass",   "levels", "pohozaev", "poincare"};

struct PoincareSettings {
    int family_size = 12;
    std::vector<double> exponents{1.0, 2.0, 4.0};
    double eps = 0.1;
};

struct RunConfig {
    Gauge gauge;
    ConvexCone cone;
    LiouvilleSolution solution;
    QuadratureSpec quad;
    std::map<std::string, double> tolerances;
    std::vector<std::string> suites;
    std::uint64_t seed;
    std::string out_dir;
    PoincareSettings poincare;
    /// Effective configuration after command-line overrides.
    nlohmann::json effective;
};

/// Command-line values that replace the corresponding config entries.
struct Overrides {
    std::vector<std::string> suites;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> budget;
};

/// Default tolerance per check name; also the set of accepted keys.
const std::map<std::string, double>& default_tolerances();

/// Strict parse: unknown keys, wrong types and inconsistent dimensions are errors.
/// Library errors raised while building the objects (for example a solution center
/// off the line factor of the cone) are rethrown as ConfigError.
RunConfig parse_config(nlohmann::json j, const Overrides& ov = {});

RunConfig load_config(const std::string& path, const Overrides& ov = {});

}  // namespace flv::cli
