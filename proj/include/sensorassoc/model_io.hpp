#pragma once

#include <string>

#include "sensorassoc/kmeans.hpp"
#include "sensorassoc/svm.hpp"

namespace sensorassoc {

/// {"centers": [[t, v], ...], "assignments": [...], "cost_history": [...], ...}
std::string kmeans_model_json(const KMeansModel& model);

/// Kernel kind, C, scaling parameters, and per-class support vectors, alphas and bias.
std::string ova_model_json(const OvaSvmModel& model);

}  // namespace sensorassoc
