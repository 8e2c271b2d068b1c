#pragma once

#include <json.hpp>

#include "reid/engine.hpp"
#include "reid/metrics.hpp"
#include "reid/simulator.hpp"
#include "reid/types.hpp"

// JSON bindings for the config-file and result-file surfaces. Field names
// mirror the struct members one to one.
namespace reid {

void to_json(nlohmann::json& j, const OcclusionEvent& e);
void from_json(const nlohmann::json& j, OcclusionEvent& e);

void to_json(nlohmann::json& j, const AppearanceChange& e);
void from_json(const nlohmann::json& j, AppearanceChange& e);

void to_json(nlohmann::json& j, const DistractorSwap& e);
void from_json(const nlohmann::json& j, DistractorSwap& e);

void to_json(nlohmann::json& j, const ScenarioConfig& c);
void from_json(const nlohmann::json& j, ScenarioConfig& c);

void to_json(nlohmann::json& j, const EngineConfig& c);
void from_json(const nlohmann::json& j, EngineConfig& c);

void to_json(nlohmann::json& j, const Decision& d);
void from_json(const nlohmann::json& j, Decision& d);

void to_json(nlohmann::json& j, const RunMetrics& m);
void from_json(const nlohmann::json& j, RunMetrics& m);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace reid
