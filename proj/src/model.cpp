#include "privrisk/model.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace privrisk {

namespace {

constexpr std::array<std::string_view, 10> kAttributeNames = {
    "Mobile", "Email", "Gender", "Pronoun", "DateOfBirth",
    "RelationshipStatus", "FromLocation", "LivesInLocation", "School", "Workplace"};

constexpr std::array<std::string_view, 20> kEntityTypes = {
    "PERSON", "NORP", "FAC", "ORG", "GPE", "LOC", "PRODUCT", "EVENT", "WORK_OF_ART",
    "LAW", "LANGUAGE", "DATE", "TIME", "PERCENT", "MONEY", "QUANTITY", "ORDINAL",
    "CARDINAL", "EMAIL", "PHONE"};

}  // namespace

std::span<const std::string_view> builtin_attribute_names() { return kAttributeNames; }

std::span<const std::string_view> default_entity_types() { return kEntityTypes; }

std::string_view to_string(PrivacyLevel level) {
  switch (level) {
    case PrivacyLevel::Public: return "public";
    case PrivacyLevel::FriendsOnly: return "friends";
    case PrivacyLevel::OnlyMe: return "only_me";
  }
  return "public";
}

PrivacyLevel parse_privacy_level(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "public") return PrivacyLevel::Public;
  if (lower == "friends" || lower == "friends_only" || lower == "friendsonly")
    return PrivacyLevel::FriendsOnly;
  if (lower == "only_me" || lower == "onlyme" || lower == "private")
    return PrivacyLevel::OnlyMe;
  throw DataError("unknown privacy setting '" + std::string(text) + "'");
}

std::optional<std::size_t> PrivacySetting::audience_size(std::size_t friend_count,
                                                         std::size_t network_size) const {
  switch (level) {
    case PrivacyLevel::Public: return network_size;
    case PrivacyLevel::FriendsOnly: return friend_count;
    case PrivacyLevel::OnlyMe: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SocialGraph SocialGraph::from_edges(std::span<const std::pair<UserId, UserId>> edges,
                                    std::span<const UserId> extra_nodes) {
  SocialGraph g;
  std::vector<UserId> ids(extra_nodes.begin(), extra_nodes.end());
  ids.reserve(ids.size() + edges.size() * 2);
  for (const auto& [a, b] : edges) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  g.ids_ = std::move(ids);

  std::vector<std::pair<Index, Index>> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a == b) {
      ++g.self_loops_;
      continue;
    }
    const Index ia = g.index_of(a);
    const Index ib = g.index_of(b);
    arcs.emplace_back(ia, ib);
    arcs.emplace_back(ib, ia);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  g.offsets_.assign(g.ids_.size() + 1, 0);
  for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.neighbors_.reserve(arcs.size());
  for (const auto& arc : arcs) g.neighbors_.push_back(arc.second);
  return g;
}

std::optional<SocialGraph::Index> SocialGraph::find(UserId user) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), user);
  if (it == ids_.end() || *it != user) return std::nullopt;
  return static_cast<Index>(it - ids_.begin());
}

bool SocialGraph::contains(UserId user) const { return find(user).has_value(); }

SocialGraph::Index SocialGraph::index_of(UserId user) const {
  if (auto idx = find(user)) return *idx;
  throw PreconditionError("user " + std::to_string(user) + " is not in the graph");
}

bool SocialGraph::has_edge(Index a, Index b) const {
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<std::pair<UserId, UserId>> SocialGraph::edges() const {
  std::vector<std::pair<UserId, UserId>> out;
  out.reserve(edge_count());
  for (Index u = 0; u < node_count(); ++u)
    for (Index v : neighbors(u))
      if (u < v) out.emplace_back(ids_[u], ids_[v]);
  return out;
}

// ---------------------------------------------------------------------------

SensitivityTable::SensitivityTable(std::map<std::string, double> weights) {
  for (auto& [type, w] : weights) {
    if (!(w >= 0.0)) throw PreconditionError("negative sensitivity for entity type " + type);
    weights_.emplace(type, w);
  }
}

double SensitivityTable::at(std::string_view entity_type) const {
  auto it = weights_.find(entity_type);
  if (it == weights_.end())
    throw PreconditionError("no sensitivity weight for entity type " +
                            std::string(entity_type));
  return it->second;
}

bool SensitivityTable::contains(std::string_view entity_type) const {
  return weights_.find(entity_type) != weights_.end();
}

SensitivityTable SensitivityTable::defaults() {
  return SensitivityTable({
      {"EMAIL", 1.0},   {"PHONE", 1.0},       {"PERSON", 0.8},   {"DATE", 0.7},
      {"GPE", 0.7},     {"LOC", 0.7},         {"MONEY", 0.6},    {"ORG", 0.5},
      {"NORP", 0.5},    {"EVENT", 0.4},       {"FAC", 0.4},      {"LAW", 0.4},
      {"PRODUCT", 0.4}, {"TIME", 0.3},        {"PERCENT", 0.3},  {"QUANTITY", 0.3},
      {"LANGUAGE", 0.2}, {"WORK_OF_ART", 0.2}, {"ORDINAL", 0.2}, {"CARDINAL", 0.2},
  });
}

// ---------------------------------------------------------------------------

bool WeightVector::valid() const noexcept {
  auto in_unit = [](double w) { return w >= 0.0 && w <= 1.0; };
  const double s = sum();
  return in_unit(aprs) && in_unit(sgprs) && in_unit(cbprs) && s >= 0.99 - 1e-12 &&
         s <= 1.0 + 1e-9;
}

void WeightVector::validate() const {
  if (!valid())
    throw PreconditionError("weights (" + std::to_string(aprs) + ", " +
                            std::to_string(sgprs) + ", " + std::to_string(cbprs) +
                            ") must lie in [0,1] and sum to 1");
}

// ---------------------------------------------------------------------------

std::size_t ValidationReport::count(ValidationFinding::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [kind](const auto& f) { return f.kind == kind; }));
}

ValidationReport validate_dataset(std::span<const ProfileRow> profile_rows,
                                  const SocialGraph& graph, std::span<const Post> posts,
                                  std::span<const EntitySpanCheck> spans) {
  using Kind = ValidationFinding::Kind;
  ValidationReport report;

  std::set<std::pair<UserId, std::string>> seen;
  std::set<UserId> unknown;
  for (const auto& row : profile_rows) {
    if (!seen.emplace(row.user, row.attribute).second)
      report.findings.push_back({Kind::DuplicateAttribute,
                                 "user " + std::to_string(row.user) + " has duplicate " +
                                     row.attribute + " entries (line " +
                                     std::to_string(row.line) + ")"});
    if (!graph.contains(row.user) && unknown.insert(row.user).second)
      report.findings.push_back({Kind::UnknownProfileUser,
                                 "profile user " + std::to_string(row.user) +
                                     " is not in the graph"});
  }

  for (const auto& post : posts) {
    if (!graph.contains(post.author))
      report.findings.push_back({Kind::DanglingAuthor,
                                 "post " + post.id + " author " +
                                     std::to_string(post.author) + " is not in the graph"});
  }

  for (const auto& check : spans) {
    for (const auto& e : check.entities) {
      const bool ok = e.start < e.end && e.end <= check.text.size() &&
                      check.text.compare(e.start, e.end - e.start, e.surface) == 0;
      if (!ok)
        report.findings.push_back({Kind::MalformedSpan,
                                   check.where + ": span [" + std::to_string(e.start) + ", " +
                                       std::to_string(e.end) + ") of type " + e.entity_type +
                                       " is malformed"});
    }
  }
  return report;
}

std::vector<UserProfile> fold_profiles(std::span<const ProfileRow> rows) {
  std::map<UserId, UserProfile> by_user;
  for (const auto& row : rows) {
    auto& profile = by_user[row.user];
    profile.user = row.user;
    profile.attributes[AttributeKind(row.attribute)] =
        AttributeEntry{row.value, PrivacySetting{row.setting}};
  }
  std::vector<UserProfile> out;
  out.reserve(by_user.size());
  for (auto& [_, p] : by_user) out.push_back(std::move(p));
  return out;
}

}  // namespace privrisk
