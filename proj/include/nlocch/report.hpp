#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlocch/config.hpp"
#include "nlocch/convergence.hpp"

namespace nlocch {

/// CSV with the columns of report_columns(), one row per eps, values printed
/// round-trip exact. Failed rows are written with empty error cells.
std::string report_csv(const ConvergenceReport& report);
/// Parses report_csv() output back into (column -> values) rows.
std::vector<std::vector<double>> parse_report_csv(const std::string& text);

/// Rows, fits, monotonicity flags, diagnostics and the resolved configuration.
/// Run-dependent data (timestamps, worker count) lives under "metadata" only.
nlohmann::json report_json(const ConvergenceReport& report, const ExperimentConfig& config);

std::string operator_study_csv(const OperatorStudy& study);
nlohmann::json operator_study_json(const OperatorStudy& study, const ExperimentConfig& config);

nlohmann::json fit_json(const RateFit& fit);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace nlocch
