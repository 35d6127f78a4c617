#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace flv::cli {

namespace fs = std::filesystem;

Record equality(std::string name, std::string anchor, double lhs, double rhs, double sigma, double tolerance,
                std::string note) {
    Record r{std::move(name), std::move(anchor), lhs, rhs, std::abs(lhs - rhs), sigma, tolerance, false, std::move(note)};
    if (tolerance < 3.0 * sigma) {
        if (!r.note.empty()) r.note += "; ";
        r.note += "tolerance below the 3-sigma floor of the estimate";
        return r;
    }
    r.pass = r.gap <= tolerance;
    return r;
}

Record upper_bound(std::string name, std::string anchor, double lhs, double rhs, double sigma, std::string note) {
    const double gap = std::max(0.0, lhs - rhs);
    return {std::move(name), std::move(anchor), lhs, rhs, gap, sigma, 3.0 * sigma, gap <= 3.0 * sigma, std::move(note)};
}

Record lower_bound(std::string name, std::string anchor, double lhs, double rhs, double sigma, std::string note) {
    const double gap = std::max(0.0, rhs - lhs);
    return {std::move(name), std::move(anchor), lhs, rhs, gap, sigma, 3.0 * sigma, gap <= 3.0 * sigma, std::move(note)};
}

Record errored(std::string name, std::string anchor, const std::string& what) {
    const double nan = std::nan("");
    return {std::move(name), std::move(anchor), nan, nan, nan, nan, nan, false, "error: " + what};
}

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json to_json(const RunReport& r) {
    using nlohmann::json;
    json recs = json::array();
    for (const auto& x : r.records) {
        recs.push_back({{"name", x.name},
                        {"anchor", x.anchor},
                        {"lhs", x.lhs},
                        {"rhs", x.rhs},
                        {"gap", x.gap},
                        {"sigma", x.sigma},
                        {"tolerance", x.tolerance},
                        {"pass", x.pass},
                        {"note", x.note}});
    }
    json j;
    j["tool"] = r.tool;
    j["version"] = r.version;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["suites"] = r.suites;
    j["records"] = recs;
    j["wall_time_s"] = r.wall_time_s ? json(*r.wall_time_s) : json(nullptr);
    j["pass"] = r.pass;
    return j;
}

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_report(const std::string& dir, const RunReport& r) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
    auto out = open_out(fs::path(dir) / "report.json");
    out << to_json(r).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for report.json");
}

void write_tables(const std::string& dir, const Tables& t) {
    const fs::path tdir = fs::path(dir) / "tables";
    std::error_code ec;
    fs::create_directories(tdir, ec);
    if (ec) throw std::runtime_error("cannot create '" + tdir.string() + "': " + ec.message());

    auto lv = open_out(tdir / "levels.csv");
    lv << "t,radius,radius_closed_form,mass_measured,mass_closed_form\n";
    for (const auto& r : t.levels) {
        lv << num(r.t) << ',' << num(r.radius) << ',' << num(r.radius_closed_form) << ',' << num(r.mass_measured) << ','
           << num(r.mass_closed_form) << '\n';
    }
    auto cv = open_out(tdir / "convergence.csv");
    cv << "h,max_residual,order\n";
    for (const auto& r : t.convergence) cv << num(r.h) << ',' << num(r.max_residual) << ',' << num(r.order) << '\n';
    auto as = open_out(tdir / "asymptotics.csv");
    as << "radius,beta_est\n";
    for (const auto& [radius, beta] : t.asymptotics) as << num(radius) << ',' << num(beta) << '\n';
    if (!lv || !cv || !as) throw std::runtime_error("write failed for tables");
}

}  // namespace flv::cli
