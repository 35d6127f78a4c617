#pragma once

#include "config.hpp"
#include "report.hpp"

#include <string>
#include <vector>

namespace flv::cli {

struct SuiteOutput {
    std::vector<Record> records;
    Tables tables;
};

/// Runs one named suite. Checks that raise become failing records.
void run_suite(const std::string& name, const RunConfig& cfg, SuiteOutput& out);

/// Runs cfg.suites in order and assembles the report (wall time left empty).
RunReport run_all(const RunConfig& cfg, Tables& tables);

}  // namespace flv::cli
