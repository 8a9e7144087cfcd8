#pragma once

// Batch entry points behind the privrisk executable. Each command returns a
// process exit code: 0 success, 1 validation error, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "privrisk/config.hpp"
#include "privrisk/pipeline.hpp"

namespace privrisk {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Where each dataset part comes from. A part without a path is generated
/// deterministically from the seed.
struct DatasetManifest {
  std::optional<std::filesystem::path> graph;     // edge list
  CommunityGraphSpec graph_model;                 // used when `graph` is absent
  std::optional<std::filesystem::path> profiles;  // TSV
  std::optional<std::filesystem::path> posts;     // JSONL
  std::optional<std::filesystem::path> config;
  std::uint64_t seed = 0;
  SyntheticPostSpec synthetic_posts;              // used when `posts` is absent
  std::optional<std::size_t> sample_posts;        // temporal uniform sample size
  bool reassign_authors = false;                  // map loaded posts onto graph users
};

/// Relative paths resolve against the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Environment variable that overrides the manifest's config path.
inline constexpr const char* kConfigEnv = "PRIVRISK_CONFIG";

EngineConfig resolve_config(const DatasetManifest& manifest);

/// Loads or generates the graph, profiles and posts.
Dataset build_dataset(const DatasetManifest& manifest, const EngineConfig& config);

struct ScoreCommand {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scenario;
  unsigned jobs = 1;
  bool extras = false;   // graph_scores.tsv and entities.tsv
};

struct GenerateCommand {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
};

struct WhatIfCommand {
  std::filesystem::path manifest;
  std::filesystem::path out;   // reads the graph cache if present
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  UserId user = 0;
  std::vector<std::string> attribute_changes;   // "Email=only_me"
  std::vector<std::string> post_changes;        // "p17=friends"
  bool recompute_structural = true;
};

struct ServeCommand {
  std::filesystem::path manifest;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> static_dir;
};

int cmd_score(const ScoreCommand& cmd, std::ostream& log);
int cmd_generate(const GenerateCommand& cmd, std::ostream& log);
int cmd_whatif(const WhatIfCommand& cmd, std::ostream& out, std::ostream& log);
int cmd_serve(const ServeCommand& cmd, std::ostream& log);

/// Scores a manifest, reusing the graph cache under `cache_dir` when valid.
std::shared_ptr<const Snapshot> score_manifest(const DatasetManifest& manifest, unsigned jobs,
                                               const std::filesystem::path& cache_dir);

/// Parses "name=level".
SettingChange parse_change(std::string_view spec, SettingChange::Target target);

}  // namespace privrisk
