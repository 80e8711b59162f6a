#pragma once

#include <string>

#include "ggbm/boosting.hpp"

namespace ggbm {

// model.json: version, mode, config, layout digest, base score, and trees as
// nested {column, threshold|categories, missing_dir, left, right}/{leaf_value}
// objects. Numbers round-trip exactly.
std::string model_to_json_string(const BoostedEnsemble& model);
BoostedEnsemble model_from_json_string(const std::string& text);

void save_model(const BoostedEnsemble& model, const std::string& path);
BoostedEnsemble load_model(const std::string& path);

}  // namespace ggbm
