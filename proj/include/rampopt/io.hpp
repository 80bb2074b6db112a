#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rampopt/retention.hpp"
#include "rampopt/simulator.hpp"

namespace rampopt {

/// Formats a double with 9 significant digits and '.' decimal separator.
std::string csv_num(double v);

void write_text_file(const std::string& path, const std::string& content);

// CSV emitters. Fixed header row; one row per trace entry / period / arm.
std::string trace_csv(const OptimizationResult& result);
std::string cohort_csv(const CohortResult& result);
std::string arms_csv(const AbEstimate& estimate);
std::string rate_sweep_csv(const std::vector<std::array<double, 3>>& rows);  // rbar, x, s

// Result documents.
nlohmann::json optimize_result_json(const OptimizationResult& result,
                                    const CurvatureReport& report, double delta);
nlohmann::json cohort_summary_json(const CohortResult& result);
nlohmann::json fitted_curve_json(const AbEstimate& estimate);
nlohmann::json classify_report_json(const CurvatureReport& report,
                                    const std::string& curve_name);

// Companion validators: re-parse checks for every emitted document.
// Each throws std::runtime_error describing the first violated field.
void validate_optimize_result_json(const nlohmann::json& doc);
void validate_cohort_summary_json(const nlohmann::json& doc);
void validate_fitted_curve_json(const nlohmann::json& doc);
void validate_classify_report_json(const nlohmann::json& doc);

}  // namespace rampopt
