#include "nlocch/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlocch/field_io.hpp"

namespace nlocch {

namespace {

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

// Columns that are meaningless once a run aborted.
bool is_error_column(const std::string& col) { return col != "eps" && col != "dt" && col != "min_aeps_eps2"; }

}  // namespace

nlohmann::json fit_json(const RateFit& fit) {
  return {{"slope", number_or_null(fit.slope)},         {"prefactor", number_or_null(fit.prefactor)},
          {"residual", number_or_null(fit.residual)},   {"points", fit.points},
          {"below_floor", fit.below_floor},              {"valid", fit.valid}};
}

std::string report_csv(const ConvergenceReport& report) {
  std::ostringstream os;
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      if (row.failed && is_error_column(cols[i])) continue;
      os << format_double(column_value(row, cols[i]));
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::vector<double>> parse_report_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::string expected;
  for (std::size_t i = 0; i < report_columns().size(); ++i) expected += (i ? "," : "") + report_columns()[i];
  if (line != expected) throw std::runtime_error("report csv: unexpected header '" + line + "'");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      row.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(cell));
    }
    while (row.size() < report_columns().size()) row.push_back(std::numeric_limits<double>::quiet_NaN());
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json report_json(const ConvergenceReport& report, const ExperimentConfig& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    for (const auto& col : report_columns()) {
      r[col] = row.failed && is_error_column(col) ? nlohmann::json(nullptr) : number_or_null(column_value(row, col));
    }
    r["stabilization"] = row.stabilization;
    r["coercivity_margin"] = row.coercivity_margin;
    r["sigma_min"] = number_or_null(row.sigma_min);
    r["sigma_max"] = number_or_null(row.sigma_max);
    r["solver_iterations"] = row.solver_iterations;
    r["failed"] = row.failed;
    if (row.failed) r["failure"] = row.failure;
    rows.push_back(std::move(r));
  }
  nlohmann::json fits = nlohmann::json::object();
  for (const auto& [name, fit] : report.fits) fits[name] = fit_json(fit);
  nlohmann::json monotone = nlohmann::json::object();
  for (const auto& [name, m] : report.monotone) monotone[name] = m;

  nlohmann::json out;
  out["rows"] = std::move(rows);
  out["fits"] = std::move(fits);
  out["monotone"] = std::move(monotone);
  out["rate_threshold"] = kRateThreshold;
  out["diagnostics"] = {
      {"local_sigma_min", report.local_sigma_min},
      {"local_sigma_max", report.local_sigma_max},
      {"preflight_ran", report.preflight_ran},
      {"temporal_error",
       {{"phi_dual_sup", report.temporal_error.phi_dual_sup},
        {"phi_l2l2", report.temporal_error.phi_l2l2},
        {"sigma_l2_sup", report.temporal_error.sigma_l2_sup},
        {"grad_sigma_l2l2", report.temporal_error.grad_sigma_l2l2}}},
      {"temporal_to_largest_error_ratio", report.preflight_ratio},
      {"temporal_to_finest_error_ratio", report.preflight_ratio_finest},
  };
  out["config"] = serialize_config(config);
  return out;
}

std::string operator_study_csv(const OperatorStudy& study) {
  std::ostringstream os;
  os << "eps";
  for (std::size_t i = 0; i < study.catalog.size(); ++i) os << ",residual_" << i;
  os << ",energy,energy_gap,min_aeps_eps2,kernel_mass\n";
  for (const auto& row : study.rows) {
    os << format_double(row.epsilon);
    for (double r : row.residuals) os << ',' << format_double(r);
    os << ',' << format_double(row.energy) << ',' << format_double(row.energy_gap) << ','
       << format_double(row.min_aeps_eps2) << ',' << format_double(row.kernel_mass) << '\n';
  }
  return os.str();
}

nlohmann::json operator_study_json(const OperatorStudy& study, const ExperimentConfig& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : study.rows) {
    rows.push_back({{"eps", row.epsilon},
                    {"residuals", row.residuals},
                    {"energy", row.energy},
                    {"energy_gap", row.energy_gap},
                    {"min_aeps_eps2", row.min_aeps_eps2},
                    {"kernel_mass", row.kernel_mass}});
  }
  nlohmann::json catalog = nlohmann::json::array();
  for (std::size_t i = 0; i < study.catalog.size(); ++i) {
    catalog.push_back({{"function", study.catalog[i].to_string()}, {"fit", fit_json(study.residual_fits[i])}});
  }
  return {{"rows", rows},
          {"catalog", catalog},
          {"energy_limit", study.energy_limit},
          {"energy_fit", fit_json(study.energy_fit)},
          {"energy_gap_decreasing", study.energy_gap_decreasing},
          {"rate_threshold", kRateThreshold},
          {"config", serialize_config(config)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace nlocch
