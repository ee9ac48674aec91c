#pragma once

#include <string>
#include <vector>

#include "geoduel/scenario.hpp"

namespace geoduel {

// One verification record. A suite usually emits several: one per
// (connection or pair, check). Failures carry the worst offending point and
// component.
struct SuiteRecord {
    std::string suite;
    std::string check;
    std::vector<std::string> connections;
    int points_evaluated = 0;
    double max_abs_residual = 0.0;
    double tolerance = 0.0; // 0 means the check must hold exactly
    bool pass = true;
    std::string notes;
    int worst_point = -1;          // index into the scenario's point list
    std::string worst_component;   // e.g. "[0][1][1]"
};

struct Report {
    std::string scenario_name;
    std::vector<SuiteRecord> records;

    bool all_pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
};

// Executes every listed suite over the scenario's points. Suite-level
// errors become failing records; the run itself keeps going. Point
// evaluation fans out over threads (capped by GEODUEL_THREADS) and reduces
// in fixed point order, so reports are byte-deterministic.
Report run_scenario(const Scenario& sc);
Report run_scenario_file(const std::string& path);

// Deterministic serialization (17-significant-digit shortest round trip,
// fixed key order).
std::string report_to_json(const Report& report);

// Human-readable one-line-per-record summary.
std::string report_summary(const Report& report);

// Dumps g, Gamma, T, S, Q, N, R and Ric at point k of the scenario with
// lexicographic component order and 17 significant digits. `connection`
// may be empty when the scenario declares at most one.
std::string print_tensors(const Scenario& sc, int point_index, const std::string& connection);

} // namespace geoduel
