#pragma once

// Dataset loading, synthetic profile generation with homophily, and the
// monthly temporal sampler used to thin post corpora.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "privrisk/model.hpp"

namespace privrisk {

// ---------------------------------------------------------------------------
// Loaders and writers

/// SNAP-style edge list: "u v" per line, '#' comment lines ignored. A line
/// holding a single id adds an isolated vertex.
/// Throws DataError("<path>:<line>: ...") on malformed lines.
SocialGraph load_edge_list(const std::filesystem::path& path);
SocialGraph parse_edge_list(std::istream& in, const std::string& source = "<stream>");
/// Edges first, then isolated vertices one per line.
void write_edge_list(std::ostream& out, const SocialGraph& graph);

/// Tab-separated rows: user_id, attribute, value, setting. An empty value
/// marks the attribute as absent. Optional header row and '#' comments.
std::vector<ProfileRow> load_profile_rows(const std::filesystem::path& path);
std::vector<ProfileRow> parse_profile_rows(std::istream& in, const std::string& source = "<stream>");
void write_profiles(std::ostream& out, std::span<const UserProfile> profiles,
                    std::span<const std::string> attribute_order);

/// Newline-delimited JSON records:
///   {"id", "author", "text", "timestamp", "visibility"?, "comments"?: [...]}
/// Output is stably ordered by timestamp. Missing visibility falls back to
/// `default_visibility`. Throws DataError naming the record index.
std::vector<Post> load_posts(const std::filesystem::path& path,
                             PrivacyLevel default_visibility = PrivacyLevel::Public);
std::vector<Post> parse_posts(std::istream& in, const std::string& source = "<stream>",
                              PrivacyLevel default_visibility = PrivacyLevel::Public);
void write_posts(std::ostream& out, std::span<const Post> posts);

// ---------------------------------------------------------------------------
// Synthetic profiles

struct AttributeDistribution {
  std::string attribute;
  double presence = 1.0;                                 // P(attribute filled in)
  bool unique_values = false;                            // e.g. Email: one value per user
  std::vector<std::pair<std::string, double>> values;    // categorical base distribution
  std::array<double, 3> visibility{1.0, 0.0, 0.0};       // Public, FriendsOnly, OnlyMe
};

struct HomophilyConfig {
  double strength = 0.0;   // h in [0, 1]
  std::vector<AttributeDistribution> attributes;

  /// Throws PreconditionError unless every distribution sums to 1 within 1e-9.
  void validate() const;
  static HomophilyConfig defaults();
};

/// One profile per graph node, visited in BFS order from the smallest id of
/// each component. With probability h a value is copied from a uniformly
/// chosen already-assigned neighbor holding the attribute, otherwise drawn from
/// the base distribution. Settings are drawn independently per attribute.
std::vector<UserProfile> generate_synthetic_profiles(const SocialGraph& graph,
                                                     const HomophilyConfig& config,
                                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// Post sampling

/// Months since 1970-01 of a UTC epoch timestamp.
std::int64_t utc_month_index(std::int64_t epoch_seconds);

/// Buckets by UTC calendar month and draws floor(k / months) per bucket
/// uniformly without replacement; the remainder goes one each to the earliest
/// months. Small buckets contribute everything they have. k >= size returns
/// every post. Output is ordered by timestamp.
std::vector<Post> temporal_uniform_sample(std::span<const Post> posts, std::size_t k,
                                          std::uint64_t seed);

/// Rewrites every post author (and comment author) to a uniformly random user.
std::vector<Post> assign_posts_round_robin(std::span<const Post> posts,
                                           std::span<const UserId> users, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Synthetic fixtures

struct CommunityGraphSpec {
  std::size_t nodes = 4039;
  std::size_t edges = 88234;
  std::size_t communities = 10;
  double cross_fraction = 0.02;   // share of edges between communities
};

/// Ego-network style graph: each community has a hub linked to all members,
/// remaining edges are drawn within communities (skewed toward low member
/// ranks) plus a small share across communities. Edge count is exact.
SocialGraph generate_community_graph(const CommunityGraphSpec& spec, std::uint64_t seed);

struct SyntheticPostSpec {
  std::size_t count = 2000;
  std::size_t max_comments = 3;
  std::int64_t start_epoch = 1609459200;   // 2021-01-01T00:00:00Z
  int months = 12;
};

/// Template-filled posts mixing entity-bearing and plain sentences; authors
/// are drawn from `users`.
std::vector<Post> generate_synthetic_posts(const SyntheticPostSpec& spec,
                                           std::span<const UserId> users, std::uint64_t seed);

}  // namespace privrisk
