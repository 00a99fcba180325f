#pragma once

#include <string>

#include <json.hpp>

#include "opshape/analysis.hpp"

namespace opshape {

nlohmann::json to_json(const OpsSummary& summary);
OpsSummary ops_summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VwSummary& summary);
nlohmann::json to_json(const LooRow& row);
nlohmann::json to_json(const ReductionTrace& trace);
nlohmann::json to_json(const StudyConfig& config);

nlohmann::json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

/// Canonical text of report.json (two-space indent, trailing newline).
std::string dump_report(const AnalysisReport& report);

}  // namespace opshape
