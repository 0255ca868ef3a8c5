#pragma once
// JSON (de)serialization for GameConfig: config files, CLI overrides, and
// the config echo embedded in reports.

#include <nlohmann/json.hpp>

#include "bdg/core.hpp"

namespace bdg {

nlohmann::json game_config_to_json(const GameConfig& cfg);

// Applies a partial overlay onto cfg. Unknown keys and malformed values are
// rejected with parse_error; the caller validates the final config.
void apply_config_overlay(GameConfig& cfg, const nlohmann::json& overlay);

const char* stopping_mode_name(StoppingMode mode) noexcept;
StoppingMode stopping_mode_from_name(const std::string& name);

const char* selection_rule_name(SelectionRule rule) noexcept;
SelectionRule selection_rule_from_name(const std::string& name);

}  // namespace bdg
