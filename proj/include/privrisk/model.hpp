#pragma once

// Domain types shared by every scoring stage. Everything here is a plain value
// type; datasets are built once and then only read.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace privrisk {

using UserId = std::uint64_t;

/// Raised for malformed input data (parse failures, schema violations).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller violates an operation precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Attributes and privacy settings

/// Profile attribute names. The ten built-in kinds always exist; configs may
/// register more, so the kind is a name rather than a closed enum.
class AttributeKind {
public:
  AttributeKind() = default;
  explicit AttributeKind(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const AttributeKind&, const AttributeKind&) = default;

private:
  std::string name_;
};

/// Mobile, Email, Gender, Pronoun, DateOfBirth, RelationshipStatus,
/// FromLocation, LivesInLocation, School, Workplace.
std::span<const std::string_view> builtin_attribute_names();

enum class PrivacyLevel { Public, FriendsOnly, OnlyMe };

/// Wire names: "public", "friends", "only_me".
std::string_view to_string(PrivacyLevel level);
PrivacyLevel parse_privacy_level(std::string_view text);

/// Stricter-than relation used by recommendations: Public < FriendsOnly < OnlyMe.
constexpr int strictness(PrivacyLevel level) {
  return static_cast<int>(level);
}

struct PrivacySetting {
  PrivacyLevel level = PrivacyLevel::Public;

  /// Users able to see the item. OnlyMe has no audience count; it maps to a
  /// fixed visibility floor instead.
  std::optional<std::size_t> audience_size(std::size_t friend_count,
                                           std::size_t network_size) const;

  friend bool operator==(const PrivacySetting&, const PrivacySetting&) = default;
};

struct AttributeEntry {
  std::optional<std::string> value;
  PrivacySetting setting;

  bool present() const noexcept { return value.has_value(); }
};

struct UserProfile {
  UserId user = 0;
  std::map<AttributeKind, AttributeEntry> attributes;
};

// ---------------------------------------------------------------------------
// Social graph

/// Immutable undirected simple graph. Node ids are dense indices internally;
/// external UserIds map onto them in ascending order.
class SocialGraph {
public:
  using Index = std::uint32_t;

  SocialGraph() = default;

  /// Builds from an edge list. Self-loops are dropped (counted), duplicates
  /// and orientation flips collapse. `extra_nodes` adds isolated vertices.
  static SocialGraph from_edges(std::span<const std::pair<UserId, UserId>> edges,
                                std::span<const UserId> extra_nodes = {});

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  std::size_t self_loops_dropped() const noexcept { return self_loops_; }

  bool contains(UserId user) const;
  /// Throws PreconditionError for unknown users.
  Index index_of(UserId user) const;
  std::optional<Index> find(UserId user) const;
  UserId id_of(Index index) const { return ids_[index]; }
  std::span<const UserId> ids() const noexcept { return ids_; }

  /// Sorted neighbor indices.
  std::span<const Index> neighbors(Index index) const {
    return {neighbors_.data() + offsets_[index],
            neighbors_.data() + offsets_[index + 1]};
  }
  std::size_t degree(Index index) const {
    return offsets_[index + 1] - offsets_[index];
  }
  /// Offset of `index`'s first slot in the flattened adjacency array.
  std::size_t adjacency_offset(Index index) const { return offsets_[index]; }
  bool has_edge(Index a, Index b) const;

  /// Each undirected edge once, as (smaller id, larger id), sorted.
  std::vector<std::pair<UserId, UserId>> edges() const;

private:
  std::vector<UserId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> neighbors_;
  std::size_t self_loops_ = 0;
};

// ---------------------------------------------------------------------------
// Content

struct Comment {
  std::string id;
  UserId author = 0;
  std::string text;
  std::int64_t timestamp = 0;
};

struct Post {
  std::string id;
  UserId author = 0;
  std::string text;
  std::int64_t timestamp = 0;
  PrivacySetting visibility_setting;
  std::vector<Comment> comments;
};

/// Typed byte span [start, end) in a source text.
struct SensitiveEntity {
  std::string entity_type;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  friend bool operator==(const SensitiveEntity&, const SensitiveEntity&) = default;
};

/// The eighteen standard NER types plus EMAIL and PHONE.
std::span<const std::string_view> default_entity_types();

class SensitivityTable {
public:
  SensitivityTable() = default;
  explicit SensitivityTable(std::map<std::string, double> weights);

  /// Throws PreconditionError naming the type when it has no weight.
  double at(std::string_view entity_type) const;
  bool contains(std::string_view entity_type) const;
  const std::map<std::string, double, std::less<>>& weights() const noexcept {
    return weights_;
  }

  static SensitivityTable defaults();

private:
  std::map<std::string, double, std::less<>> weights_;
};

// ---------------------------------------------------------------------------
// Weights and reports

/// Component weights for the comprehensive score, in (APRS, SGPRS, CBPRS) order.
struct WeightVector {
  double aprs = 0.0;
  double sgprs = 0.0;
  double cbprs = 0.0;

  double sum() const noexcept { return aprs + sgprs + cbprs; }
  /// Components in [0,1]; sum in [0.99, 1 + 1e-9]. The lower slack admits the
  /// two-decimal equal preset 0.33/0.33/0.33.
  bool valid() const noexcept;
  void validate() const;
};

struct WeightScenario {
  std::string name;
  WeightVector weights;
};

struct Suggestion {
  PrivacyLevel setting = PrivacyLevel::OnlyMe;
  double delta = 0.0;   // raw component reduction
};

struct Recommendation {
  enum class Kind { Attribute, Post };
  Kind kind = Kind::Attribute;
  std::string item;      // attribute name or post id
  PrivacyLevel current = PrivacyLevel::Public;
  double term = 0.0;     // current breakdown term
  std::vector<Suggestion> suggestions;
};

struct RiskReport {
  UserId user = 0;
  double aprs_raw = 0.0;
  double sgprs_raw = 0.0;
  double cbprs_raw = 0.0;
  double aprs = 0.0;
  double sgprs = 0.0;
  double cbprs = 0.0;
  double r_struct = 0.0;
  double r_imp = 0.0;
  std::vector<std::pair<std::string, double>> cprs;   // scenario order
  std::map<std::string, double> attribute_breakdown;
  std::vector<std::pair<std::string, double>> post_breakdown;   // post order
  std::vector<Recommendation> recommendations;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationFinding {
  enum class Kind { DanglingAuthor, DuplicateAttribute, MalformedSpan, UnknownProfileUser };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool valid() const noexcept { return findings.empty(); }
  std::size_t count(ValidationFinding::Kind kind) const;
};

/// A raw (profile) row before it is folded into a UserProfile; kept so that
/// duplicate attribute rows can be reported instead of silently merged.
struct ProfileRow {
  UserId user = 0;
  std::string attribute;
  std::optional<std::string> value;
  PrivacyLevel setting = PrivacyLevel::Public;
  std::size_t line = 0;
};

struct EntitySpanCheck {
  std::string text;
  std::vector<SensitiveEntity> entities;
  std::string where;
};

ValidationReport validate_dataset(std::span<const ProfileRow> profile_rows,
                                  const SocialGraph& graph,
                                  std::span<const Post> posts,
                                  std::span<const EntitySpanCheck> spans = {});

/// Folds rows into profiles (last row wins on duplicates; validate first).
std::vector<UserProfile> fold_profiles(std::span<const ProfileRow> rows);

}  // namespace privrisk
