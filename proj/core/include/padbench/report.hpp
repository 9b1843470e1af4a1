#pragma once

#include <string>
#include <vector>

#include "padbench/metrics.hpp"

namespace padbench {

// Deterministic JSON form (sorted keys, stable float formatting); identical
// inputs serialize to identical bytes.
std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json_text);
EvaluationReport load_report(const std::string& path);

// Fixed 2-decimal percent formatting used by every rendered table.
std::string format_rate(double percent);

// Aligned plain-text table, one row per report:
// protocol | HTER (%) | ACER (%) | APCER (%) | BPCER (%) | dev EER (%)
std::string render_report_table(const std::vector<EvaluationReport>& reports);

}  // namespace padbench
