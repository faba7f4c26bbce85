#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "json.hpp"
#include "spex/harness/evaluation.h"

namespace spex::harness {

inline constexpr int kReportFormatVersion = 1;

// With include_runtime false the wall times and the worker count are left
// out, so two runs of the same config compare byte for byte.
nlohmann::json report_to_json(const EvalReport& rep, bool include_runtime = true);
EvalReport report_from_json(const nlohmann::json& doc);

// Writes report.json ("json") and performance.csv, correctness_curve.csv,
// tradeoff.csv ("csv") into dir, creating it if needed.
void emit_report(const EvalReport& rep, const std::filesystem::path& dir,
                 const std::set<std::string>& formats = {"json", "csv"});

EvalReport load_report(const std::filesystem::path& path);

// Rows = (model, method); per-scenario column groups of train/test mean and
// sd, total time and complexity.
std::string performance_csv(const EvalReport& rep);

}  // namespace spex::harness
