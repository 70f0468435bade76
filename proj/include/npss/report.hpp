#pragma once

// JSON and CSV encodings of scan, strategy and experiment outputs. Every
// document carries "schema_version" and an echo of the configuration that
// produced it.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "npss/evaluate.hpp"
#include "npss/fgss.hpp"
#include "npss/strategies.hpp"

namespace npss {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ScoreConfig& cfg);
nlohmann::json to_json(const ScanConfig& cfg);
nlohmann::json to_json(const ScanResult& result);
nlohmann::json to_json(const StrategyResult& result);
nlohmann::json to_json(const TrialMetrics& metrics);
nlohmann::json to_json(const ExperimentReport& report);

/// Inverse of to_json for strategy documents; ParseError on missing or
/// mistyped fields.
StrategyResult strategy_result_from_json(const nlohmann::json& doc);

/// One "trial" row per trial followed by "mean" and "std" rows.
std::string experiment_csv(const ExperimentReport& report);

/// Writes `doc` pretty-printed with a trailing newline; IoError on failure.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace npss
