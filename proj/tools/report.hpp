#pragma once

// Report rows for the verification suites: every checked number is emitted
// with its tolerance. Cases run on a small worker pool; rows are sorted by
// (suite, case) before writing so the output does not depend on scheduling.

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace maasslab::cli {

/// Bad flags, unreadable files, malformed descriptors: exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Measurement {
    double residual;
    std::string note;
};

struct Case {
    std::string suite;
    std::string id;
    std::string inputs;
    double tolerance;
    std::function<Measurement()> measure;
};

struct ReportRow {
    std::string suite;
    std::string id;
    std::string inputs;
    double residual;
    double tolerance;
    bool pass;
    std::string note;
    double wall_ms;
};

inline ReportRow run_case(const Case& c) {
    const auto t0 = std::chrono::steady_clock::now();
    ReportRow row{c.suite, c.id, c.inputs, 0.0, c.tolerance, false, "", 0.0};
    try {
        Measurement m = c.measure();
        row.residual = m.residual;
        row.note = std::move(m.note);
    } catch (const std::exception& e) {
        row.residual = std::numeric_limits<double>::infinity();
        row.note = std::string("exception: ") + e.what();
    }
    row.pass = row.residual <= row.tolerance;  // NaN fails
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

inline std::vector<ReportRow> run_cases(const std::vector<Case>& cases, int jobs) {
    std::vector<ReportRow> rows(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) rows[i] = run_case(cases[i]);
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.suite, a.id) < std::tie(b.suite, b.id);
    });
    return rows;
}

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& os, const std::vector<ReportRow>& rows, bool timing) {
    os << "# maass-lab report v1\n";
    os << "suite,case,inputs,residual,tolerance,pass,note";
    if (timing) os << ",wall_ms";
    os << "\n";
    for (const auto& r : rows) {
        os << csv_field(r.suite) << ',' << csv_field(r.id) << ',' << csv_field(r.inputs) << ',' << format_double(r.residual)
           << ',' << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.note);
        if (timing) os << ',' << format_double(r.wall_ms);
        os << "\n";
    }
}

inline nlohmann::ordered_json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

inline void write_json(std::ostream& os, const std::vector<ReportRow>& rows, bool timing) {
    nlohmann::ordered_json out;
    out["format"] = "maass-lab report v1";
    out["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["suite"] = r.suite;
        j["case"] = r.id;
        j["inputs"] = r.inputs;
        j["residual"] = json_number(r.residual);
        j["tolerance"] = json_number(r.tolerance);
        j["pass"] = r.pass;
        j["note"] = r.note;
        if (timing) j["wall_ms"] = r.wall_ms;
        out["rows"].push_back(std::move(j));
    }
    os << out.dump(2) << "\n";
}

} // namespace maasslab::cli
