#pragma once

#include <optional>
#include <string_view>

#include "threshgate/gaussfit.hpp"

namespace threshgate {

enum class ModelVariant { Dual, Single, Manual };

std::string_view to_string(ModelVariant v) noexcept;

struct ModelChoice {
  ModelVariant variant = ModelVariant::Manual;
  std::optional<FitReport> dual_report;
  std::optional<FitReport> single_report;
};

inline constexpr double kDefaultDeltaFactor = 2.0;

/// With both fits valid the two-component model wins only if
/// delta_dual < delta_factor * delta_single and epsilon_dual < epsilon_single.
/// Otherwise the only valid fit wins; with none valid the result is Manual.
ModelChoice select_model(const FitReport& dual, const FitReport& single, double delta_factor = kDefaultDeltaFactor);

}  // namespace threshgate
