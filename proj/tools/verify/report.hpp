#pragma once

#include "flv/nlaplacian.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flv::cli {

struct Record {
    std::string name;
    std::string anchor;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double sigma = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

/// |lhs - rhs| <= tolerance. A tolerance below 3 sigma cannot be certified and fails.
Record equality(std::string name, std::string anchor, double lhs, double rhs, double sigma, double tolerance,
                std::string note = {});

/// lhs <= rhs up to 3 sigma; gap is the excess max(0, lhs - rhs).
Record upper_bound(std::string name, std::string anchor, double lhs, double rhs, double sigma, std::string note = {});

/// lhs >= rhs up to 3 sigma; gap is the shortfall max(0, rhs - lhs).
Record lower_bound(std::string name, std::string anchor, double lhs, double rhs, double sigma, std::string note = {});

/// Record for a check that raised instead of producing numbers.
Record errored(std::string name, std::string anchor, const std::string& what);

struct LevelRow {
    double t;
    double radius;
    double radius_closed_form;
    double mass_measured;
    double mass_closed_form;
};

struct Tables {
    std::vector<LevelRow> levels;
    std::vector<ConvergenceRow> convergence;
    std::vector<std::pair<double, double>> asymptotics;
};

struct RunReport {
    std::string tool = "verify";
    std::string version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::string> suites;
    std::vector<Record> records;
    std::optional<double> wall_time_s;
    bool pass = false;
};

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a64(const std::string& bytes);

nlohmann::json to_json(const RunReport& r);

/// Writes report.json into dir; throws std::runtime_error on IO failure.
void write_report(const std::string& dir, const RunReport& r);

/// Writes tables/levels.csv, tables/convergence.csv, tables/asymptotics.csv.
void write_tables(const std::string& dir, const Tables& t);

}  // namespace flv::cli
