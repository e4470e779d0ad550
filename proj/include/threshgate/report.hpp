#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "threshgate/evaluation.hpp"
#include "threshgate/gaussfit.hpp"
#include "threshgate/threshold.hpp"

namespace threshgate {

inline constexpr std::string_view kToolName = "threshgate";
inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr const char* kFixedTimestampEnv = "THRESHGATE_FIXED_TIMESTAMP";

/// Rounds to 9 significant digits; non-finite values become JSON null.
nlohmann::json json_number(double value);

nlohmann::json to_json(const GaussianParams& p);
nlohmann::json to_json(const FitReport& report);
nlohmann::json to_json(const MetricsReport& m);
/// Model choice, both fit diagnostics, tau and subset size.
nlohmann::json to_json(const ThresholdDecision& decision);

/// Byte count and SHA-256 (hex) of a file's content.
nlohmann::json file_digest(const std::string& path);

/// Value of THRESHGATE_FIXED_TIMESTAMP when set, else the current UTC time (ISO-8601).
std::string report_timestamp();

/// Writes through a sibling temp file and renames it over `path`.
void write_file_atomically(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

}  // namespace threshgate
