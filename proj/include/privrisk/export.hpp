#pragma once

// Serialization of snapshots: per-user reports, population summaries and the
// graph-score cache.

#include <filesystem>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "privrisk/pipeline.hpp"

namespace privrisk {

nlohmann::json to_json(const RiskReport& report);
nlohmann::json to_json(const WhatIfResult& result);
nlohmann::json to_json(const NeighborSubgraph& subgraph);
nlohmann::json to_json(const ComponentSummary& summary, std::span<const ScenarioRow> rows);

/// Per-post content breakdown for one user: text, visibility, entities with
/// their weights, R(p), R(C(p)) and R_Total.
nlohmann::json content_json(const Snapshot& snapshot, UserId user);

/// One JSON object per line, graph-index order.
void write_reports(std::ostream& out, const Snapshot& snapshot);
/// component, min, mean, max for APRS / SGPRS / CBPRS.
void write_summary(std::ostream& out, const ComponentSummary& summary);
/// One row per scenario: weights, component means and CPRS.
void write_scenarios(std::ostream& out, std::span<const ScenarioRow> rows,
                     const ComponentSummary& summary);
void write_graph_scores(std::ostream& out, const Snapshot& snapshot);
void write_entities(std::ostream& out, const Snapshot& snapshot);

struct ExportOptions {
  bool graph_scores = false;
  bool entities = false;
  std::optional<std::string> scenario;   // restrict cprs.tsv to one scenario
};

/// Writes reports.jsonl, summary.tsv, cprs.tsv (and optional extras) into
/// `dir`, creating it. Also stores the graph-score cache under dir/cache.
void export_snapshot(const std::filesystem::path& dir, const Snapshot& snapshot,
                     const ExportOptions& options = {});

/// Graph-score cache. Only neighbors-only similarity maps are cached.
void save_graph_cache(const std::filesystem::path& path, const SocialGraph& graph,
                      const GraphScores& scores);
/// Returns nullopt when the file is missing, unreadable or built for a
/// different graph or parameter set.
std::optional<GraphScores> load_graph_cache(const std::filesystem::path& path,
                                            const SocialGraph& graph, std::uint64_t fingerprint);

}  // namespace privrisk
