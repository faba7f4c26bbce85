#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "spex/models/regressor.h"

namespace spex::models {

inline constexpr int kModelFormatVersion = 1;

// Versioned document: {"format": "spex-model", "version": 1, "type": ...}.
// Supported types: linear, svr, mlp, forest.
nlohmann::json model_to_json(const Regressor& model);
std::unique_ptr<Regressor> model_from_json(const nlohmann::json& doc);

void save_model(const Regressor& model, const std::string& path);
std::unique_ptr<Regressor> load_model(const std::string& path);

}  // namespace spex::models
