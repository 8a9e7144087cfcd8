#pragma once

// Engine configuration: taxonomy, sensitivity table, visibility floor, weight
// scenarios, algorithm parameters and synthetic-generation settings. Loaded
// from a single JSON file; absent keys keep their defaults.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "privrisk/aggregate.hpp"
#include "privrisk/attribute_risk.hpp"
#include "privrisk/graph_risk.hpp"
#include "privrisk/ingest.hpp"
#include "privrisk/model.hpp"

namespace privrisk {

struct EngineConfig {
  std::vector<std::string> attributes;
  std::vector<std::string> entity_types;
  SensitivityTable sensitivity = SensitivityTable::defaults();
  double only_me_visibility = kOnlyMeVisibility;
  SensitivityModel sensitivity_model = SensitivityModel::Afiuf;
  Normalization normalization = Normalization::MinMax;
  std::vector<WeightScenario> scenarios = default_scenarios();
  std::optional<AhpMatrix> ahp;
  SimRankParams simrank;
  PageRankParams pagerank;
  SgprsWeights sgprs_weights;
  double recommendation_threshold = 0.1;
  bool commenter_attribution = false;
  PrivacyLevel default_post_visibility = PrivacyLevel::Public;
  std::filesystem::path gazetteer_dir;
  HomophilyConfig homophily = HomophilyConfig::defaults();
  std::size_t neighbor_limit = 200;

  static EngineConfig defaults();

  /// Scenario presets plus an "ahp" scenario when a matrix is configured.
  std::vector<WeightScenario> all_scenarios() const;

  /// Throws PreconditionError on inconsistent settings (missing sensitivity
  /// weights, invalid weights, bad distributions).
  void validate() const;

  /// Stable 64-bit hash of the canonical JSON form.
  std::uint64_t fingerprint() const;
};

/// Relative paths (gazetteer_dir) resolve against `base_dir`.
EngineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
EngineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const EngineConfig& config);

/// FNV-1a over bytes.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace privrisk
