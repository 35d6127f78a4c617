#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace flv::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    return obj.at(key);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + ": expected a finite number");
    return x;
}

long long integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return v.get<long long>();
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    return v.get<std::string>();
}

Vec vector(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(kMaxDim)) {
        throw ConfigError(where + ": expected an array of 1 to " + std::to_string(kMaxDim) + " numbers");
    }
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = number(v[i], where);
    return out;
}

Mat matrix(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(kMaxDim)) {
        throw ConfigError(where + ": expected a square array of rows");
    }
    const int n = static_cast<int>(v.size());
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        Vec row = vector(v[static_cast<std::size_t>(i)], where);
        if (row.size() != n) throw ConfigError(where + ": matrix must be square");
        m.row(i) = row.transpose();
    }
    return m;
}

Gauge parse_gauge(const json& j) {
    const std::string w = "gauge";
    const std::string family = text(require(j, "family", w), w + ".family");
    if (family == "euclidean") {
        check_keys(j, {"family", "dim"}, w);
        return Gauge::euclidean(static_cast<int>(integer(require(j, "dim", w), w + ".dim")));
    }
    if (family == "pnorm") {
        check_keys(j, {"family", "dim", "q"}, w);
        return Gauge::pnorm(static_cast<int>(integer(require(j, "dim", w), w + ".dim")),
                            number(require(j, "q", w), w + ".q"));
    }
    if (family == "ellipsoid") {
        check_keys(j, {"family", "matrix"}, w);
        return Gauge::ellipsoid(matrix(require(j, "matrix", w), w + ".matrix"));
    }
    if (family == "linear_image") {
        check_keys(j, {"family", "matrix", "q"}, w);
        return Gauge::linear_image(matrix(require(j, "matrix", w), w + ".matrix"), number(require(j, "q", w), w + ".q"));
    }
    if (family == "drifted") {
        check_keys(j, {"family", "drift"}, w);
        return Gauge::drifted(vector(require(j, "drift", w), w + ".drift"));
    }
    throw ConfigError("gauge.family: unknown family '" + family + "'");
}

ConvexCone parse_cone(const json& j) {
    const std::string w = "cone";
    const std::string kind = text(require(j, "kind", w), w + ".kind");
    const int dim = static_cast<int>(integer(require(j, "dim", w), w + ".dim"));
    if (kind == "full_space") {
        check_keys(j, {"kind", "dim"}, w);
        return ConvexCone::full_space(dim);
    }
    if (kind == "half_space") {
        check_keys(j, {"kind", "dim"}, w);
        return ConvexCone::half_space(dim);
    }
    if (kind == "orthant") {
        check_keys(j, {"kind", "dim", "m"}, w);
        return ConvexCone::orthant(dim, static_cast<int>(integer(require(j, "m", w), w + ".m")));
    }
    if (kind == "custom") {
        check_keys(j, {"kind", "dim", "k", "normals"}, w);
        const json& ns = require(j, "normals", w);
        if (!ns.is_array()) throw ConfigError("cone.normals: expected an array");
        std::vector<Vec> normals;
        for (const auto& n : ns) normals.push_back(vector(n, w + ".normals"));
        return ConvexCone(dim, static_cast<int>(integer(require(j, "k", w), w + ".k")), std::move(normals));
    }
    throw ConfigError("cone.kind: unknown kind '" + kind + "'");
}

QuadratureSpec parse_quadrature(const json& j) {
    QuadratureSpec q;
    if (j.is_null()) return q;
    const std::string w = "quadrature";
    check_keys(j, {"method", "budget", "target_rel_err", "cross_check_samples"}, w);
    if (j.contains("method")) {
        const std::string m = text(j.at("method"), w + ".method");
        if (m == "tensor_polar") q.method = QuadMethod::tensor_polar;
        else if (m == "monte_carlo") q.method = QuadMethod::monte_carlo;
        else throw ConfigError("quadrature.method: unknown method '" + m + "'");
    }
    if (j.contains("budget")) q.budget = static_cast<int>(integer(j.at("budget"), w + ".budget"));
    if (j.contains("target_rel_err")) q.target_rel_err = number(j.at("target_rel_err"), w + ".target_rel_err");
    if (j.contains("cross_check_samples")) {
        q.cross_check_samples = static_cast<int>(integer(j.at("cross_check_samples"), w + ".cross_check_samples"));
    }
    return q;
}

PoincareSettings parse_poincare(const json& j) {
    PoincareSettings p;
    if (j.is_null()) return p;
    const std::string w = "poincare";
    check_keys(j, {"family_size", "exponents", "eps"}, w);
    if (j.contains("family_size")) p.family_size = static_cast<int>(integer(j.at("family_size"), w + ".family_size"));
    if (j.contains("exponents")) {
        const json& e = j.at("exponents");
        if (!e.is_array() || e.empty()) throw ConfigError("poincare.exponents: expected a non-empty array");
        p.exponents.clear();
        for (const auto& v : e) p.exponents.push_back(number(v, w + ".exponents"));
    }
    if (j.contains("eps")) p.eps = number(j.at("eps"), w + ".eps");
    if (p.family_size < 1) throw ConfigError("poincare.family_size: must be positive");
    for (double e : p.exponents) {
        if (!(e >= 1.0)) throw ConfigError("poincare.exponents: every exponent must be >= 1");
    }
    if (!(p.eps > 0.0 && p.eps < 1.0)) throw ConfigError("poincare.eps: must lie in (0, 1)");
    return p;
}

std::vector<std::string> parse_suites(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("suites: expected a non-empty array of names");
    std::vector<std::string> out;
    for (const auto& v : j) {
        const std::string s = text(v, "suites");
        std::vector<std::string> add;
        if (s == "all") add = kSuiteOrder;
        else if (std::find(kSuiteOrder.begin(), kSuiteOrder.end(), s) != kSuiteOrder.end()) add = {s};
        else throw ConfigError("suites: unknown suite '" + s + "'");
        for (auto& a : add) {
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        }
    }
    return out;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t = {
        {"sphere_bounds", 1e-9},  {"homogeneity", 1e-12},   {"euler", 1e-10},          {"dual_closed_form", 1e-6},
        {"dual_identity", 1e-6},  {"reconstruction", 1e-6}, {"wulff_identity", 1e-3},  {"isoperimetric", 1e-3},
        {"residual", 1e-3},       {"convergence_order", 0.5}, {"neumann", 1e-8},       {"mass", 5e-3},
        {"mass_mc", 1e-2},        {"flux", 1e-2},           {"beta", 1e-3},            {"coarea", 1e-2},
        {"level_closed_form", 1e-3}, {"level_spread", 1e-8}, {"pohozaev", 1e-2},       {"decay_slope", 0.3},
    };
    return t;
}

RunConfig parse_config(json j, const Overrides& ov) {
    check_keys(j, {"gauge", "cone", "solution", "quadrature", "tolerances", "suites", "seed", "output", "poincare"},
               "config");
    if (!ov.suites.empty()) j["suites"] = ov.suites;
    if (ov.seed) j["seed"] = *ov.seed;
    if (ov.out_dir) j["output"] = json{{"dir", *ov.out_dir}};
    if (ov.budget) j["quadrature"]["budget"] = *ov.budget;

    try {
        Gauge g = parse_gauge(require(j, "gauge", "config"));
        ConvexCone C = parse_cone(require(j, "cone", "config"));

        const json& s = require(j, "solution", "config");
        check_keys(s, {"N", "lambda", "x0"}, "solution");
        const int N = static_cast<int>(integer(require(s, "N", "solution"), "solution.N"));
        const double lambda = number(require(s, "lambda", "solution"), "solution.lambda");
        Vec x0 = s.contains("x0") ? vector(s.at("x0"), "solution.x0") : Vec(Vec::Zero(N));
        if (g.dim() != N || C.dim() != N || x0.size() != N) {
            throw ConfigError("config: gauge, cone and solution dimensions must agree");
        }
        LiouvilleSolution sol(g, N, lambda, x0, C);

        QuadratureSpec quad = parse_quadrature(j.contains("quadrature") ? j.at("quadrature") : json());
        std::uint64_t seed = 1;
        if (j.contains("seed")) {
            const json& sv = j.at("seed");
            if (!sv.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
            seed = sv.get<std::uint64_t>();
        }
        quad.seed = seed;
        validate(quad);

        std::map<std::string, double> tol = default_tolerances();
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            if (!t.is_object()) throw ConfigError("tolerances: expected an object");
            for (const auto& [key, v] : t.items()) {
                if (!tol.count(key)) throw ConfigError("tolerances: unknown check '" + key + "'");
                double x = number(v, "tolerances." + key);
                if (!(x >= 0.0)) throw ConfigError("tolerances." + key + ": must be non-negative");
                tol[key] = x;
            }
        }

        std::vector<std::string> suites = parse_suites(j.contains("suites") ? j.at("suites") : json::array({"all"}));

        std::string out = "out";
        if (j.contains("output")) {
            check_keys(j.at("output"), {"dir"}, "output");
            if (j.at("output").contains("dir")) out = text(j.at("output").at("dir"), "output.dir");
        }
        PoincareSettings pc = parse_poincare(j.contains("poincare") ? j.at("poincare") : json());

        return RunConfig{std::move(g), std::move(C), std::move(sol), quad, std::move(tol), std::move(suites),
                         seed, std::move(out), std::move(pc), j};
    } catch (const flv::Error& e) {
        throw ConfigError(std::string("config rejected: ") + e.what());
    }
}

RunConfig load_config(const std::string& path, const Overrides& ov) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(std::move(j), ov);
}

}  // namespace flv::cli
