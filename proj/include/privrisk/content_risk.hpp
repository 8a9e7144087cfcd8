#pragma once

// Content risk: sensitive entities in posts and comments, weighted by type
// sensitivity and scaled by the post's visibility.

#include <filesystem>
#include <map>
#include <memory>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privrisk/model.hpp"

namespace privrisk {

/// Text -> entity spans. Implementations must be deterministic and return
/// valid byte offsets sorted by start.
class EntityExtractor {
public:
  virtual ~EntityExtractor() = default;
  virtual std::vector<SensitiveEntity> extract(std::string_view text) const = 0;
};

struct RuleExtractorConfig {
  /// (entity type, ECMAScript pattern). Earlier entries win ties.
  std::vector<std::pair<std::string, std::string>> patterns;
  /// Entity type -> terms. Type order in `gazetteer_order` breaks ties.
  std::map<std::string, std::vector<std::string>> gazetteers;
  std::vector<std::string> gazetteer_order;

  /// Built-in patterns with no gazetteers.
  static RuleExtractorConfig default_patterns();
  /// Built-in patterns plus `<TYPE>.txt` word lists found in `dir`.
  static RuleExtractorConfig from_directory(const std::filesystem::path& dir);
};

/// Regex patterns for numeric/contact types and case-insensitive,
/// longest-match gazetteers for named types. Overlaps resolve longest first,
/// then leftmost, then by type priority.
class RuleExtractor final : public EntityExtractor {
public:
  explicit RuleExtractor(const RuleExtractorConfig& config);

  std::vector<SensitiveEntity> extract(std::string_view text) const override;

  /// Every entity type this extractor can emit.
  std::vector<std::string> entity_types() const;

private:
  struct Pattern {
    std::string type;
    std::regex regex;
    int priority;
  };
  struct TrieNode {
    std::map<std::string, std::unique_ptr<TrieNode>, std::less<>> children;
    int type_index = -1;
  };

  std::vector<Pattern> patterns_;
  std::vector<std::string> gazetteer_types_;
  TrieNode trie_;
};

/// Shared extractor over the shipped gazetteers.
const RuleExtractor& default_extractor();

// ---------------------------------------------------------------------------

/// Sum of per-entity sensitivities; duplicates count once each.
double post_sensitivity(std::span<const SensitiveEntity> entities, const SensitivityTable& table);

double post_risk(double sensitivity, double visibility);

struct PostAnalysis {
  std::vector<SensitiveEntity> text_entities;
  std::vector<std::vector<SensitiveEntity>> comment_entities;   // comment order
};

PostAnalysis analyze_post(const Post& post, const EntityExtractor& extractor);

struct CommentRisk {
  std::string comment_id;
  UserId author = 0;
  double sensitivity = 0.0;
  double risk = 0.0;
};

struct CommentRisks {
  std::vector<CommentRisk> comments;
  double total = 0.0;
};

struct PostRisk {
  std::string post_id;
  double sensitivity = 0.0;   // S(p)
  double visibility = 0.0;    // V(p), inherited by comments
  double risk = 0.0;          // R(p)
  CommentRisks comments;      // R(c_k), R(C(p))
  double total = 0.0;         // R(p) + R(C(p))
};

/// Comment risks with visibility inherited from the parent post.
CommentRisks comment_risks(const Post& post, const SensitivityTable& table,
                           const EntityExtractor& extractor, double post_visibility);

PostRisk score_post(const Post& post, const PostAnalysis& analysis, const SensitivityTable& table,
                    double post_visibility);

double post_total_risk(const Post& post, const SensitivityTable& table,
                       const EntityExtractor& extractor, double post_visibility);

struct CbprsResult {
  double raw = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;   // post id -> R_Total
};

/// Sum of post totals for `user`. Every post must be authored by `user`;
/// `visibility_of` maps a post to V(p).
template <typename VisibilityFn>
CbprsResult cbprs(UserId user, std::span<const Post> posts, const SensitivityTable& table,
                  const EntityExtractor& extractor, VisibilityFn&& visibility_of) {
  CbprsResult result;
  for (const auto& post : posts) {
    if (post.author != user)
      throw PreconditionError("post " + post.id + " is not authored by user " +
                              std::to_string(user));
    const double total = post_total_risk(post, table, extractor, visibility_of(post));
    result.breakdown.emplace_back(post.id, total);
    result.raw += total;
  }
  return result;
}

}  // namespace privrisk
