#pragma once

// End-to-end scoring of a dataset into an immutable Snapshot, plus pure
// what-if recomputation against a published snapshot.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privrisk/aggregate.hpp"
#include "privrisk/attribute_risk.hpp"
#include "privrisk/config.hpp"
#include "privrisk/content_risk.hpp"
#include "privrisk/graph_risk.hpp"
#include "privrisk/model.hpp"

namespace privrisk {

struct Dataset {
  SocialGraph graph;
  std::vector<ProfileRow> profile_rows;
  std::vector<UserProfile> profiles;
  std::vector<Post> posts;

  /// Folds rows into profiles.
  static Dataset assemble(SocialGraph graph, std::vector<ProfileRow> rows, std::vector<Post> posts);
  static Dataset assemble(SocialGraph graph, std::vector<UserProfile> profiles,
                          std::vector<Post> posts);

  const UserProfile* profile_of(UserId user) const;
};

/// Graph-only results; depend on the edge set and algorithm parameters only,
/// so they can be cached across runs.
struct GraphScores {
  SimilarityMap similarity;
  std::vector<double> pagerank;
  int pagerank_iterations = 0;
  std::uint64_t fingerprint = 0;
};

std::uint64_t graph_fingerprint(const SocialGraph& graph, const SimRankParams& simrank,
                                const PageRankParams& pagerank);

GraphScores compute_graph_scores(const SocialGraph& graph, const SimRankParams& simrank,
                                 const PageRankParams& pagerank);

struct Snapshot {
  std::shared_ptr<const Dataset> dataset;
  EngineConfig config;
  std::vector<WeightScenario> scenarios;
  AttributeStats stats;
  GraphScores graph_scores;

  // Per graph index.
  std::vector<AprsResult> aprs_detail;
  std::vector<double> aprs_raw, aprs;
  std::vector<double> r_struct, r_imp, sgprs_raw, sgprs;
  std::vector<double> cbprs_raw, cbprs;
  std::vector<std::vector<std::size_t>> contributing_posts;   // post indices per user

  // Per post (dataset order).
  std::vector<PostAnalysis> post_analysis;
  std::vector<PostRisk> post_risk;

  std::vector<RiskReport> reports;   // per graph index
  ComponentSummary summary;
  std::vector<ScenarioRow> scenario_rows;
  std::uint64_t fingerprint = 0;

  const RiskReport* report(UserId user) const;
  std::optional<std::size_t> post_index(std::string_view post_id) const;

  /// V(p) for post `index` at `level`.
  double post_visibility(std::size_t index, PrivacyLevel level) const;

  /// Contribution of post `index` (with the given risk) to user `u`'s CBPRS.
  double contribution(std::size_t index, const PostRisk& risk, UserId user) const;
};

struct ScoreOptions {
  unsigned jobs = 1;
  const EntityExtractor* extractor = nullptr;   // default: rule extractor over config gazetteers
  std::optional<GraphScores> cached_graph;      // used when its fingerprint matches
};

/// Full pipeline. Throws PreconditionError when the population is empty or
/// the dataset references users outside the graph.
std::shared_ptr<const Snapshot> score_dataset(std::shared_ptr<const Dataset> dataset,
                                              const EngineConfig& config,
                                              const ScoreOptions& options = {});

// ---------------------------------------------------------------------------
// What-if

struct SettingChange {
  enum class Target { Attribute, Post };
  Target target = Target::Attribute;
  std::string item;   // attribute name or post id
  PrivacyLevel setting = PrivacyLevel::OnlyMe;
};

struct ScoreView {
  double aprs_raw = 0.0, aprs = 0.0;
  double r_struct = 0.0, sgprs_raw = 0.0, sgprs = 0.0;
  double cbprs_raw = 0.0, cbprs = 0.0;
  std::vector<std::pair<std::string, double>> cprs;
};

struct WhatIfResult {
  UserId user = 0;
  ScoreView before;
  ScoreView after;
  /// SimRank is not re-run; structural risk is recomputed over frozen
  /// similarities when requested, otherwise SGPRS is carried over.
  bool sgprs_stale = true;
};

/// Unknown user, attribute or post (or an attribute the user does not fill
/// in, or a post the user did not author).
class NotFoundError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Pure: the snapshot is never modified.
WhatIfResult what_if(const Snapshot& snapshot, UserId user, std::span<const SettingChange> changes,
                     bool recompute_structural = true);

// ---------------------------------------------------------------------------
// Neighborhood view

struct NeighborNode {
  UserId id = 0;
  int depth = 0;
  double sgprs = 0.0, sgprs_raw = 0.0, r_struct = 0.0, r_imp = 0.0;
  double neighbor_risk = 0.0;   // normalized APRS, the value propagated to neighbors
};

struct NeighborSubgraph {
  std::vector<NeighborNode> nodes;
  std::vector<std::pair<UserId, UserId>> edges;
  bool truncated = false;
};

/// BFS ball of radius `depth` around `user`, capped at `limit` nodes; edges
/// are those of the induced subgraph.
NeighborSubgraph neighbor_subgraph(const Snapshot& snapshot, UserId user, int depth,
                                   std::size_t limit);

}  // namespace privrisk
