#include "threshgate/model_select.hpp"

namespace threshgate {

std::string_view to_string(ModelVariant v) noexcept {
  switch (v) {
    case ModelVariant::Dual: return "dual";
    case ModelVariant::Single: return "single";
    case ModelVariant::Manual: return "manual";
  }
  return "manual";
}

ModelChoice select_model(const FitReport& dual, const FitReport& single, double delta_factor) {
  ModelChoice choice{ModelVariant::Manual, dual, single};
  if (dual.valid && single.valid) {
    const bool dual_better = dual.delta < delta_factor * single.delta && dual.epsilon < single.epsilon;
    choice.variant = dual_better ? ModelVariant::Dual : ModelVariant::Single;
  } else if (dual.valid) {
    choice.variant = ModelVariant::Dual;
  } else if (single.valid) {
    choice.variant = ModelVariant::Single;
  }
  return choice;
}

}  // namespace threshgate
