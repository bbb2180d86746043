#pragma once

#include <string>

#include "srca/metrics.hpp"
#include "srca/solver.hpp"

namespace srca {

/// JSON schema: {kind:"sphere", mean, rotation (row-major), index_set
/// (1-based), center, radius, weight ("identity" or row-major matrix),
/// final_loss, converged, config}. Doubles round-trip exactly.
std::string model_to_json(const SphereModel& model);
SphereModel model_from_json(const std::string& text);

void save_model(const SphereModel& model, const std::string& path);
SphereModel load_model(const std::string& path);

std::string report_to_json(const EvaluationReport& report);

/// One-row CSV with the fixed column order
/// mse,oos_mse,sc,chi,dbi,cc,auc,wauc; absent fields stay empty.
std::string report_to_csv(const EvaluationReport& report);

}  // namespace srca
