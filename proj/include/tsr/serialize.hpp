#pragma once

#include "tsr/linearity.hpp"
#include "tsr/model_selection.hpp"
#include "tsr/neural_ar.hpp"
#include "tsr/regime_models.hpp"
#include "tsr/stationarity.hpp"

#include <json.hpp>

namespace tsr {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const RegimeModel& model);
json to_json(const NnetArModel& model);
json to_json(const FittedModel& model);
json to_json(const OrderSelection& selection);
json to_json(const LinearityTestReport& report);
json to_json(const PerronDetrendResult& detrend, const PhillipsPerronResult& pp, double significance);
json to_json(const ComparisonReport& report);

/// Inverse of to_json for model records; dispatches on "kind".
FittedModel model_from_json(const json& j);

}  // namespace tsr
