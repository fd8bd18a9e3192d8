#pragma once

#include "glspec/levy_model.hpp"

#include <json.hpp>

#include <string>

namespace glspec {

/// Parse {"sigma2", "m", "jumps": {"kind": ...}}; errors name the offending field path.
LevyModel model_from_json(const nlohmann::json& j);
LevyModel parse_model(const std::string& text);
LevyModel load_model(const std::string& path);

nlohmann::json model_to_json(const LevyModel& model);
nlohmann::json scalars_to_json(const ModelScalars& s);

} // namespace glspec
