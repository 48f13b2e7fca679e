#pragma once

#include <nlohmann/json.hpp>

#include "spam/model.hpp"

namespace spam {

inline constexpr int kModelFormatVersion = 1;

// Model document layout:
// {format_version, d, C, rank_spec{degree, ranks}, bias[], order1[][],
//  bases{"l": [[..]]}, singular{"l": [[..]]}, mode_flags{neural, convex_mode},
//  feature_nets?}
// Arrays are row-major; doubles serialize with shortest round-trip precision,
// so save/load is exact.
nlohmann::json model_to_json(const SpamModel& model);
SpamModel model_from_json(const nlohmann::json& j);

void save_model(const SpamModel& model, const std::string& path);
SpamModel load_model(const std::string& path);

// write-temp-then-rename so readers never observe partial files
void atomic_write_file(const std::string& path, const std::string& contents);

nlohmann::json load_json_file(const std::string& path);

}  // namespace spam
