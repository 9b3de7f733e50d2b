#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mqrep/distillation.h"
#include "mqrep/harness.h"
#include "mqrep/oracles.h"

namespace mqrep {

inline constexpr const char* kSchemaVersion = "mqrep.results.v1";

// Shortest text that reads back to the same double.
std::string format_double(double v);

nlohmann::json to_json(const BatchStats& s);
BatchStats batch_stats_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimParams& p);
nlohmann::json to_json(const PolicyConfig& p);

// Long-format tables. Column order is fixed.
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

std::string design_csv(const DesignStudy& study);
nlohmann::json design_json(const DesignStudy& study);

struct OracleComparison {
    OracleRunConfig config;
    OracleResult closed_form;
    OracleResult printed_convention;  // same case, continuous output fidelity
    EmpiricalOracle empirical;
};

std::string oracle_csv(const std::vector<OracleComparison>& rows);
nlohmann::json oracle_json(const std::vector<OracleComparison>& rows);

struct ScheduleRow {
    std::string kind;  // "banded" or "pumping"
    double f0 = 0.0;
    int round = 0;
    double fidelity = 0.0;
    double cumulative_prob = 0.0;  // banded only
    double limit = 0.0;            // pumping only
};

std::string schedule_csv(const std::vector<ScheduleRow>& rows);
nlohmann::json schedule_json(const std::vector<ScheduleRow>& rows);

// Wraps a payload with the schema tag.
nlohmann::json envelope(const std::string& kind, nlohmann::json payload);
std::string dump_json(const nlohmann::json& j);

// "-" or empty writes to stdout. Throws std::runtime_error naming the path.
void write_output(const std::string& path, const std::string& content);

}  // namespace mqrep
