#include "bdg/config_io.hpp"

#include <cmath>

#include "bdg/error.hpp"

namespace bdg {

using nlohmann::json;

const char* stopping_mode_name(StoppingMode mode) noexcept {
  return mode == StoppingMode::Classic ? "classic" : "wasserstein";
}

StoppingMode stopping_mode_from_name(const std::string& name) {
  if (name == "classic") return StoppingMode::Classic;
  if (name == "wasserstein") return StoppingMode::Wasserstein;
  fail(errc::parse_error, "unknown stopping mode '" + name + "'");
}

const char* selection_rule_name(SelectionRule rule) noexcept {
  switch (rule) {
    case SelectionRule::Average: return "average";
    case SelectionRule::GeneratorOnly: return "generator";
    case SelectionRule::VerifierOnly: return "verifier";
  }
  return "average";
}

SelectionRule selection_rule_from_name(const std::string& name) {
  if (name == "average") return SelectionRule::Average;
  if (name == "generator") return SelectionRule::GeneratorOnly;
  if (name == "verifier") return SelectionRule::VerifierOnly;
  fail(errc::parse_error, "unknown selection rule '" + name + "'");
}

json game_config_to_json(const GameConfig& cfg) {
  return json{{"lambda_g", cfg.lambda_g},
              {"lambda_v", cfg.lambda_v},
              {"eta_g", cfg.eta_g},
              {"eta_v", cfg.eta_v},
              {"sigma", cfg.sigma},
              {"delta_w", cfg.delta_w},
              {"epsilon", cfg.epsilon},
              {"max_iterations", cfg.max_iterations},
              {"n_candidates", cfg.n_candidates},
              {"max_sampling_calls", cfg.max_sampling_calls},
              {"temperatures", cfg.temperatures},
              {"stopping", stopping_mode_name(cfg.stopping_mode)},
              {"selection", selection_rule_name(cfg.selection_rule)}};
}

void apply_config_overlay(GameConfig& cfg, const json& overlay) {
  if (!overlay.is_object()) fail(errc::parse_error, "config must be a JSON object");
  auto number = [](const json& v, const char* key) {
    if (!v.is_number()) fail(errc::parse_error, std::string("config.") + key + ": expected number");
    return v.get<double>();
  };
  auto integer = [&number](const json& v, const char* key) {
    double d = number(v, key);
    if (d != std::floor(d)) {
      fail(errc::parse_error, std::string("config.") + key + ": expected integer");
    }
    return static_cast<long long>(d);
  };
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "lambda_g") cfg.lambda_g = number(v, "lambda_g");
    else if (key == "lambda_v") cfg.lambda_v = number(v, "lambda_v");
    else if (key == "eta_g") cfg.eta_g = number(v, "eta_g");
    else if (key == "eta_v") cfg.eta_v = number(v, "eta_v");
    else if (key == "sigma") cfg.sigma = number(v, "sigma");
    else if (key == "delta_w") cfg.delta_w = number(v, "delta_w");
    else if (key == "epsilon") cfg.epsilon = number(v, "epsilon");
    else if (key == "max_iterations") cfg.max_iterations = static_cast<int>(integer(v, "max_iterations"));
    else if (key == "n_candidates") cfg.n_candidates = static_cast<std::size_t>(integer(v, "n_candidates"));
    else if (key == "max_sampling_calls") cfg.max_sampling_calls = static_cast<std::size_t>(integer(v, "max_sampling_calls"));
    else if (key == "temperatures") {
      if (!v.is_array()) fail(errc::parse_error, "config.temperatures: expected array");
      cfg.temperatures.clear();
      for (const json& t : v) cfg.temperatures.push_back(number(t, "temperatures[]"));
    }
    else if (key == "stopping") {
      if (!v.is_string()) fail(errc::parse_error, "config.stopping: expected string");
      cfg.stopping_mode = stopping_mode_from_name(v.get<std::string>());
    }
    else if (key == "selection") {
      if (!v.is_string()) fail(errc::parse_error, "config.selection: expected string");
      cfg.selection_rule = selection_rule_from_name(v.get<std::string>());
    }
    else {
      fail(errc::parse_error, "unknown config key '" + key + "'");
    }
  }
}

}  // namespace bdg
