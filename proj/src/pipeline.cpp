#include "privrisk/pipeline.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "parallel.hpp"
#include "privrisk/ingest.hpp"

namespace privrisk {

Dataset Dataset::assemble(SocialGraph graph, std::vector<ProfileRow> rows, std::vector<Post> posts) {
  Dataset d;
  d.graph = std::move(graph);
  d.profiles = fold_profiles(rows);
  d.profile_rows = std::move(rows);
  d.posts = std::move(posts);
  return d;
}

Dataset Dataset::assemble(SocialGraph graph, std::vector<UserProfile> profiles,
                          std::vector<Post> posts) {
  Dataset d;
  d.graph = std::move(graph);
  std::sort(profiles.begin(), profiles.end(),
            [](const UserProfile& a, const UserProfile& b) { return a.user < b.user; });
  for (const auto& p : profiles)
    for (const auto& [kind, entry] : p.attributes)
      d.profile_rows.push_back({p.user, kind.name(), entry.value, entry.setting.level, 0});
  d.profiles = std::move(profiles);
  d.posts = std::move(posts);
  return d;
}

const UserProfile* Dataset::profile_of(UserId user) const {
  auto it = std::lower_bound(profiles.begin(), profiles.end(), user,
                             [](const UserProfile& p, UserId u) { return p.user < u; });
  return it != profiles.end() && it->user == user ? &*it : nullptr;
}

// ---------------------------------------------------------------------------

std::uint64_t graph_fingerprint(const SocialGraph& graph, const SimRankParams& simrank,
                                const PageRankParams& pagerank) {
  std::ostringstream os;
  os.precision(17);
  os << graph.node_count() << ' ' << simrank.decay << ' ' << simrank.max_iterations << ' '
     << simrank.epsilon << ' ' << pagerank.damping << ' ' << pagerank.max_iterations << ' '
     << pagerank.epsilon << '\n';
  for (auto id : graph.ids()) os << id << ' ';
  os << '\n';
  write_edge_list(os, graph);
  return fnv1a(os.str());
}

GraphScores compute_graph_scores(const SocialGraph& graph, const SimRankParams& simrank,
                                 const PageRankParams& pagerank) {
  GraphScores scores;
  scores.similarity = privrisk::simrank(graph, simrank);
  scores.pagerank = privrisk::pagerank(graph, pagerank, &scores.pagerank_iterations);
  scores.fingerprint = graph_fingerprint(graph, simrank, pagerank);
  return scores;
}

// ---------------------------------------------------------------------------

const RiskReport* Snapshot::report(UserId user) const {
  const auto idx = dataset->graph.find(user);
  return idx ? &reports[*idx] : nullptr;
}

std::optional<std::size_t> Snapshot::post_index(std::string_view post_id) const {
  const auto& posts = dataset->posts;
  for (std::size_t i = 0; i < posts.size(); ++i)
    if (posts[i].id == post_id) return i;
  return std::nullopt;
}

double Snapshot::post_visibility(std::size_t index, PrivacyLevel level) const {
  const auto& graph = dataset->graph;
  const auto author = graph.index_of(dataset->posts[index].author);
  return visibility(PrivacySetting{level}, graph.degree(author), graph.node_count(),
                    config.only_me_visibility);
}

double Snapshot::contribution(std::size_t index, const PostRisk& risk, UserId user) const {
  const auto& post = dataset->posts[index];
  if (!config.commenter_attribution) return post.author == user ? risk.total : 0.0;
  double term = post.author == user ? risk.risk : 0.0;
  for (std::size_t k = 0; k < post.comments.size(); ++k)
    if (post.comments[k].author == user) term += risk.comments.comments[k].risk;
  return term;
}

namespace {

AprsOptions aprs_options(const EngineConfig& config) {
  return {config.sensitivity_model, config.only_me_visibility};
}

template <typename RiskOf>
double sum_contributions(const Snapshot& s, std::span<const std::size_t> posts, UserId user,
                         RiskOf&& risk_of) {
  double raw = 0.0;
  for (auto i : posts) raw += s.contribution(i, risk_of(i), user);
  return raw;
}

void check_membership(const Dataset& d, bool include_commenters) {
  for (const auto& p : d.profiles)
    if (!d.graph.contains(p.user))
      throw PreconditionError("profile user " + std::to_string(p.user) + " is not in the graph");
  for (const auto& post : d.posts) {
    if (!d.graph.contains(post.author))
      throw PreconditionError("post " + post.id + " author " + std::to_string(post.author) +
                              " is not in the graph");
    if (include_commenters)
      for (const auto& c : post.comments)
        if (!d.graph.contains(c.author))
          throw PreconditionError("comment " + c.id + " author " + std::to_string(c.author) +
                                  " is not in the graph");
  }
}

}  // namespace

std::shared_ptr<const Snapshot> score_dataset(std::shared_ptr<const Dataset> dataset,
                                              const EngineConfig& config,
                                              const ScoreOptions& options) {
  config.validate();
  const auto& graph = dataset->graph;
  const std::size_t n = graph.node_count();
  if (n == 0) throw PreconditionError("cannot score an empty population");
  check_membership(*dataset, config.commenter_attribution);

  auto snap = std::make_shared<Snapshot>();
  Snapshot& s = *snap;
  s.dataset = dataset;
  s.config = config;
  s.scenarios = config.all_scenarios();
  s.stats = compute_attribute_stats(dataset->profiles, n);

  // Attribute risk.
  const auto aopts = aprs_options(config);
  s.aprs_detail.resize(n);
  s.aprs_raw.resize(n);
  detail::parallel_for(n, options.jobs, [&](std::size_t u) {
    if (const auto* profile = dataset->profile_of(graph.id_of(static_cast<SocialGraph::Index>(u))))
      s.aprs_detail[u] = aprs(*profile, s.stats, graph, aopts);
    s.aprs_raw[u] = s.aprs_detail[u].raw;
  });
  s.aprs = normalize_population(s.aprs_raw, config.normalization);

  // Graph risk.
  const auto fp = graph_fingerprint(graph, config.simrank, config.pagerank);
  if (options.cached_graph && options.cached_graph->fingerprint == fp &&
      config.simrank.pair_scope == SimRankParams::PairScope::NeighborsOnly)
    s.graph_scores = *options.cached_graph;
  else
    s.graph_scores = compute_graph_scores(graph, config.simrank, config.pagerank);
  s.r_struct = structural_risk(graph, s.graph_scores.similarity, s.aprs);
  s.r_imp = importance_risk(s.graph_scores.pagerank);
  s.sgprs_raw = sgprs(s.r_struct, s.r_imp, config.sgprs_weights);
  s.sgprs = normalize_population(s.sgprs_raw, config.normalization);

  // Content risk.
  std::unique_ptr<RuleExtractor> owned;
  const EntityExtractor* extractor = options.extractor;
  if (!extractor) {
    if (config.gazetteer_dir == EngineConfig::defaults().gazetteer_dir) {
      extractor = &default_extractor();
    } else {
      owned = std::make_unique<RuleExtractor>(RuleExtractorConfig::from_directory(config.gazetteer_dir));
      extractor = owned.get();
    }
  }
  const auto& posts = dataset->posts;
  s.post_analysis.resize(posts.size());
  s.post_risk.resize(posts.size());
  detail::parallel_for(posts.size(), options.jobs, [&](std::size_t i) {
    s.post_analysis[i] = analyze_post(posts[i], *extractor);
    s.post_risk[i] = score_post(posts[i], s.post_analysis[i], config.sensitivity,
                                s.post_visibility(i, posts[i].visibility_setting.level));
  });

  s.contributing_posts.assign(n, {});
  for (std::size_t i = 0; i < posts.size(); ++i) {
    s.contributing_posts[graph.index_of(posts[i].author)].push_back(i);
    if (config.commenter_attribution)
      for (const auto& c : posts[i].comments) {
        auto& list = s.contributing_posts[graph.index_of(c.author)];
        if (list.empty() || list.back() != i) list.push_back(i);
      }
  }
  s.cbprs_raw.resize(n);
  for (std::size_t u = 0; u < n; ++u)
    s.cbprs_raw[u] = sum_contributions(s, s.contributing_posts[u], graph.id_of(static_cast<SocialGraph::Index>(u)),
                                       [&](std::size_t i) -> const PostRisk& { return s.post_risk[i]; });
  s.cbprs = normalize_population(s.cbprs_raw, config.normalization);

  // Reports.
  s.reports.resize(n);
  detail::parallel_for(n, options.jobs, [&](std::size_t u) {
    const UserId user = graph.id_of(static_cast<SocialGraph::Index>(u));
    ComponentScores c{s.aprs_raw[u], s.sgprs_raw[u], s.cbprs_raw[u], s.aprs[u],
                      s.sgprs[u],    s.cbprs[u],     s.r_struct[u],  s.r_imp[u]};

    std::vector<std::pair<std::string, double>> post_breakdown;
    for (auto i : s.contributing_posts[u])
      post_breakdown.emplace_back(posts[i].id, s.contribution(i, s.post_risk[i], user));

    std::vector<Recommendation> recs;
    if (const auto* profile = dataset->profile_of(user))
      recs = attribute_recommendations(*profile, s.stats, graph, aopts,
                                       config.recommendation_threshold);

    std::vector<std::size_t> authored;
    std::vector<PostRisk> authored_risk;
    std::vector<PrivacyLevel> levels;
    for (auto i : s.contributing_posts[u])
      if (posts[i].author == user) {
        authored.push_back(i);
        authored_risk.push_back(s.post_risk[i]);
        levels.push_back(posts[i].visibility_setting.level);
      }
    auto post_recs = post_recommendations(
        authored_risk, levels, s.cbprs_raw[u], config.recommendation_threshold,
        [&](std::size_t k, PrivacyLevel level) {
          const std::size_t changed = authored[k];
          const PostRisk alt = score_post(posts[changed], s.post_analysis[changed],
                                          config.sensitivity, s.post_visibility(changed, level));
          return sum_contributions(s, s.contributing_posts[u], user,
                                   [&](std::size_t i) -> const PostRisk& {
                                     return i == changed ? alt : s.post_risk[i];
                                   });
        });
    recs.insert(recs.end(), std::make_move_iterator(post_recs.begin()),
                std::make_move_iterator(post_recs.end()));

    s.reports[u] = build_report(user, c, s.scenarios, s.aprs_detail[u].breakdown,
                                std::move(post_breakdown), std::move(recs));
  });

  s.summary = component_summary(s.reports);
  s.scenario_rows = scenario_table(s.summary, s.scenarios);

  std::ostringstream os;
  write_posts(os, posts);
  std::vector<std::string> attr_order = config.attributes;
  write_profiles(os, dataset->profiles, attr_order);
  s.fingerprint = fnv1a(os.str(), fp ^ config.fingerprint());
  return snap;
}

// ---------------------------------------------------------------------------

WhatIfResult what_if(const Snapshot& s, UserId user, std::span<const SettingChange> changes,
                     bool recompute_structural) {
  const auto& graph = s.dataset->graph;
  const auto idx = graph.find(user);
  if (!idx) throw NotFoundError("unknown user " + std::to_string(user));
  const std::size_t u = *idx;
  const auto& posts = s.dataset->posts;

  const UserProfile* profile = s.dataset->profile_of(user);
  UserProfile changed_profile = profile ? *profile : UserProfile{user, {}};
  std::map<std::size_t, PrivacyLevel> post_changes;
  bool attribute_changed = false;
  for (const auto& change : changes) {
    if (change.target == SettingChange::Target::Attribute) {
      auto it = changed_profile.attributes.find(AttributeKind(change.item));
      if (it == changed_profile.attributes.end() || !it->second.present())
        throw NotFoundError("user " + std::to_string(user) + " has no " + change.item + " attribute");
      it->second.setting.level = change.setting;
      attribute_changed = true;
    } else {
      const auto p = s.post_index(change.item);
      if (!p || posts[*p].author != user)
        throw NotFoundError("user " + std::to_string(user) + " has no post " + change.item);
      post_changes[*p] = change.setting;
    }
  }

  const auto view = [&](std::size_t i, double ar, double a, double rs, double sr, double sg,
                        double cr, double cb) {
    (void)i;
    ScoreView v{ar, a, rs, sr, sg, cr, cb, {}};
    for (const auto& sc : s.scenarios) v.cprs.emplace_back(sc.name, cprs(a, sg, cb, sc.weights));
    return v;
  };

  WhatIfResult result;
  result.user = user;
  result.before = view(u, s.aprs_raw[u], s.aprs[u], s.r_struct[u], s.sgprs_raw[u], s.sgprs[u],
                       s.cbprs_raw[u], s.cbprs[u]);
  result.sgprs_stale = true;

  // Attribute component.
  std::vector<double> aprs_raw = s.aprs_raw;
  if (attribute_changed)
    aprs_raw[u] = aprs(changed_profile, s.stats, graph,
                       {s.config.sensitivity_model, s.config.only_me_visibility}).raw;
  const auto aprs_norm = attribute_changed ? normalize_population(aprs_raw, s.config.normalization)
                                           : s.aprs;

  // Graph component over frozen similarities.
  std::vector<double> r_struct = s.r_struct;
  std::vector<double> sgprs_raw = s.sgprs_raw;
  std::vector<double> sgprs_norm = s.sgprs;
  if (attribute_changed && recompute_structural) {
    r_struct = structural_risk(graph, s.graph_scores.similarity, aprs_norm);
    sgprs_raw = sgprs(r_struct, s.r_imp, s.config.sgprs_weights);
    sgprs_norm = normalize_population(sgprs_raw, s.config.normalization);
  }

  // Content component.
  std::vector<double> cbprs_raw = s.cbprs_raw;
  std::vector<double> cbprs_norm = s.cbprs;
  if (!post_changes.empty()) {
    std::map<std::size_t, PostRisk> rescored;
    std::set<std::size_t> affected;
    for (const auto& [p, level] : post_changes) {
      rescored.emplace(p, score_post(posts[p], s.post_analysis[p], s.config.sensitivity,
                                     s.post_visibility(p, level)));
      affected.insert(graph.index_of(posts[p].author));
      if (s.config.commenter_attribution)
        for (const auto& c : posts[p].comments) affected.insert(graph.index_of(c.author));
    }
    for (auto a : affected) {
      const UserId who = graph.id_of(static_cast<SocialGraph::Index>(a));
      cbprs_raw[a] = sum_contributions(s, s.contributing_posts[a], who,
                                       [&](std::size_t i) -> const PostRisk& {
                                         auto it = rescored.find(i);
                                         return it != rescored.end() ? it->second : s.post_risk[i];
                                       });
    }
    cbprs_norm = normalize_population(cbprs_raw, s.config.normalization);
  }

  result.after = view(u, aprs_raw[u], aprs_norm[u], r_struct[u], sgprs_raw[u], sgprs_norm[u],
                      cbprs_raw[u], cbprs_norm[u]);
  return result;
}

// ---------------------------------------------------------------------------

NeighborSubgraph neighbor_subgraph(const Snapshot& s, UserId user, int depth, std::size_t limit) {
  const auto& graph = s.dataset->graph;
  const auto start = graph.find(user);
  if (!start) throw NotFoundError("unknown user " + std::to_string(user));
  if (depth < 0) throw PreconditionError("depth must be non-negative");
  limit = std::max<std::size_t>(limit, 1);

  NeighborSubgraph out;
  std::map<SocialGraph::Index, int> seen;
  std::queue<SocialGraph::Index> q;
  seen.emplace(*start, 0);
  q.push(*start);
  std::vector<SocialGraph::Index> order;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    order.push_back(v);
    const int d = seen[v];
    if (d == depth) continue;
    for (auto w : graph.neighbors(v)) {
      if (seen.count(w)) continue;
      if (seen.size() >= limit) {
        out.truncated = true;
        continue;
      }
      seen.emplace(w, d + 1);
      q.push(w);
    }
  }

  for (auto v : order)
    out.nodes.push_back({graph.id_of(v), seen[v], s.sgprs[v], s.sgprs_raw[v], s.r_struct[v],
                         s.r_imp[v], s.aprs[v]});
  std::vector<SocialGraph::Index> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto v : sorted)
    for (auto w : graph.neighbors(v))
      if (v < w && std::binary_search(sorted.begin(), sorted.end(), w))
        out.edges.emplace_back(graph.id_of(v), graph.id_of(w));
  return out;
}

}  // namespace privrisk
