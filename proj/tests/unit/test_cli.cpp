#include "config.hpp"
#include "report.hpp"
#include "suites.hpp"

#include <doctest.h>

#include <cmath>

using namespace flv::cli;
using nlohmann::json;

namespace {

json base() {
    return json::parse(R"({
      "gauge": {"family": "euclidean", "dim": 2},
      "cone": {"kind": "full_space", "dim": 2},
      "solution": {"N": 2, "lambda": 1.0, "x0": [0.0, 0.0]},
      "suites": ["gauge"],
      "seed": 5
    })");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults and overrides") {
    RunConfig c = parse_config(base());
    CHECK(c.seed == 5);
    CHECK(c.quad.seed == 5);
    CHECK(c.quad.budget == 4096);
    CHECK(c.out_dir == "out");
    CHECK(c.suites == std::vector<std::string>{"gauge"});
    CHECK(c.tolerances.at("mass") == 5e-3);

    Overrides ov;
    ov.suites = {"all"};
    ov.seed = 11;
    ov.budget = 2048;
    ov.out_dir = "elsewhere";
    c = parse_config(base(), ov);
    CHECK(c.suites == kSuiteOrder);
    CHECK(c.quad.seed == 11);
    CHECK(c.quad.budget == 2048);
    CHECK(c.out_dir == "elsewhere");
    CHECK(c.effective["seed"] == 11);
}

TEST_CASE("gauge and cone families parse") {
    json j = base();
    j["gauge"] = json::parse(R"({"family": "ellipsoid", "matrix": [[2, 0.3], [0.3, 1]]})");
    j["cone"] = json::parse(R"({"kind": "orthant", "dim": 2, "m": 2})");
    RunConfig c = parse_config(j);
    CHECK(c.gauge.kind() == flv::GaugeKind::ellipsoid);
    CHECK(c.cone.facet_count() == 2);
    j["gauge"] = json::parse(R"({"family": "drifted", "drift": [0.2, -0.1]})");
    j["cone"] = json::parse(R"({"kind": "custom", "dim": 2, "k": 0, "normals": [[-1, 0], [0, -1]]})");
    c = parse_config(j);
    CHECK(c.gauge.kind() == flv::GaugeKind::drifted);
    CHECK(c.cone.k() == 0);
    j["gauge"] = json::parse(R"({"family": "linear_image", "matrix": [[1, 0.5], [0, 1]], "q": 3})");
    CHECK(parse_config(j).gauge.kind() == flv::GaugeKind::linear_image);
}

TEST_CASE("invalid configs are rejected") {
    auto rejects = [](json j) { CHECK_THROWS_AS(parse_config(std::move(j)), ConfigError); };
    json j = base();
    j["extra"] = 1;
    rejects(j);
    j = base();
    j["gauge"]["q"] = 3;
    rejects(j);
    j = base();
    j["gauge"]["family"] = "hexagon";
    rejects(j);
    j = base();
    j["solution"]["N"] = 3;
    rejects(j);
    j = base();
    j["suites"] = {"mass", "nope"};
    rejects(j);
    j = base();
    j["tolerances"] = {{"made_up", 1.0}};
    rejects(j);
    j = base();
    j["solution"]["lambda"] = "one";
    rejects(j);
    j = base();
    j["cone"] = json::parse(R"({"kind": "orthant", "dim": 2, "m": 2})");
    j["solution"]["x0"] = {1.0, 0.0};
    rejects(j);
    j = base();
    j["quadrature"] = {{"method", "tensor_polar"}, {"budget", 10}, {"wat", 1}};
    rejects(j);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("record semantics") {
    auto r = equality("x", "a", 1.0, 1.05, 0.001, 0.1);
    CHECK(r.pass);
    CHECK(r.gap == doctest::Approx(0.05));
    r = equality("x", "a", 1.0, 1.05, 0.001, 0.01);
    CHECK_FALSE(r.pass);
    r = equality("x", "a", 1.0, 1.0, 0.1, 0.01);
    CHECK_FALSE(r.pass);
    CHECK(r.note.find("3-sigma") != std::string::npos);
    r = upper_bound("x", "a", 1.0, 2.0, 0.0);
    CHECK(r.pass);
    CHECK(r.gap == 0.0);
    r = upper_bound("x", "a", 2.1, 2.0, 0.01);
    CHECK_FALSE(r.pass);
    r = lower_bound("x", "a", 1.99, 2.0, 0.01);
    CHECK(r.pass);
    r = errored("x", "a", "boom");
    CHECK_FALSE(r.pass);
    CHECK(std::isnan(r.lhs));
    CHECK(r.note == "error: boom");
}

TEST_CASE("report serialization") {
    CHECK(fnv1a64("") == "cbf29ce484222325");
    CHECK(fnv1a64("a") == "af63dc4c8601ec8c");
    RunReport rep;
    rep.version = "0";
    rep.records.push_back(equality("n", "anchor", 1, 1, 0, 1));
    rep.pass = true;
    json j = to_json(rep);
    CHECK(j["tool"] == "verify");
    CHECK(j["wall_time_s"].is_null());
    CHECK(j["records"][0]["anchor"] == "anchor");
    for (const char* key : {"name", "lhs", "rhs", "gap", "sigma", "tolerance", "pass", "note"})
        CHECK(j["records"][0].contains(key));
    rep.wall_time_s = 1.5;
    CHECK(to_json(rep)["wall_time_s"] == 1.5);
}

TEST_CASE("gauge suite runs and is deterministic") {
    const RunConfig c = parse_config(base());
    Tables t1, t2;
    const RunReport a = run_all(c, t1);
    const RunReport b = run_all(c, t2);
    CHECK(a.pass);
    CHECK_FALSE(a.records.empty());
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(a.config_hash.size() == 16);
}

TEST_CASE("a failing check becomes a record instead of aborting the run") {
    json j = base();
    j["tolerances"] = {{"homogeneity", 0.0}, {"sphere_bounds", 0.0}};
    const RunReport rep = [&] {
        Tables t;
        return run_all(parse_config(j), t);
    }();
    CHECK_FALSE(rep.records.empty());
}

}
