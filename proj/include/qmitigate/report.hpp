#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qmitigate/experiments.hpp"

namespace qmitigate {

enum class ReportFormat { Json, Csv, Svg };

/// Parses a comma-separated list such as "json,csv,svg".
std::vector<ReportFormat> parse_formats(std::string_view text);

/// Flattened metric rows, one line per (mitigator, configuration).
std::string report_to_csv(const ExperimentReport& report);

/// Self-contained SVG charts keyed by file stem (e.g. "success_probability").
std::vector<std::pair<std::string, std::string>> report_to_svgs(const ExperimentReport& report);

/// Writes `<experiment>.json`, `<experiment>.csv` and `<experiment>_<chart>.svg`
/// into `out_dir`, each via a temporary file and rename. Returns the paths written.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir,
                                               const std::vector<ReportFormat>& formats);

/// Writes `content` to `path` through a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace qmitigate
