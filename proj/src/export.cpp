#include "privrisk/export.hpp"

#include <cstdio>
#include <fstream>

namespace privrisk {

using nlohmann::json;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json view_json(const ScoreView& v) {
  json cprs = json::object();
  for (const auto& [name, value] : v.cprs) cprs[name] = value;
  return {{"aprs_raw", v.aprs_raw}, {"aprs", v.aprs},         {"r_struct", v.r_struct},
          {"sgprs_raw", v.sgprs_raw}, {"sgprs", v.sgprs},     {"cbprs_raw", v.cbprs_raw},
          {"cbprs", v.cbprs},         {"cprs", std::move(cprs)}};
}

json entity_json(const SensitiveEntity& e, const SensitivityTable& table) {
  return {{"type", e.entity_type},
          {"start", e.start},
          {"end", e.end},
          {"surface", e.surface},
          {"sensitivity", table.contains(e.entity_type) ? table.at(e.entity_type) : 0.0}};
}

void write_file(const std::filesystem::path& path, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::filesystem::filesystem_error("cannot write", path,
                                            std::make_error_code(std::errc::io_error));
  writer(out);
  out.flush();
  if (!out)
    throw std::filesystem::filesystem_error("write failed", path,
                                            std::make_error_code(std::errc::io_error));
}

}  // namespace

json to_json(const RiskReport& r) {
  json j;
  j["user"] = r.user;
  j["aprs_raw"] = r.aprs_raw;
  j["sgprs_raw"] = r.sgprs_raw;
  j["cbprs_raw"] = r.cbprs_raw;
  j["aprs"] = r.aprs;
  j["sgprs"] = r.sgprs;
  j["cbprs"] = r.cbprs;
  j["r_struct"] = r.r_struct;
  j["r_imp"] = r.r_imp;
  j["cprs"] = json::object();
  for (const auto& [name, value] : r.cprs) j["cprs"][name] = value;
  j["attribute_breakdown"] = json::object();
  for (const auto& [name, value] : r.attribute_breakdown) j["attribute_breakdown"][name] = value;
  j["post_breakdown"] = json::array();
  for (const auto& [id, value] : r.post_breakdown)
    j["post_breakdown"].push_back({{"post", id}, {"risk", value}});
  j["recommendations"] = json::array();
  for (const auto& rec : r.recommendations) {
    json suggestions = json::array();
    for (const auto& s : rec.suggestions)
      suggestions.push_back({{"setting", std::string(to_string(s.setting))}, {"delta", s.delta}});
    j["recommendations"].push_back(
        {{"kind", rec.kind == Recommendation::Kind::Attribute ? "attribute" : "post"},
         {"item", rec.item},
         {"current", std::string(to_string(rec.current))},
         {"term", rec.term},
         {"suggestions", std::move(suggestions)}});
  }
  return j;
}

json to_json(const WhatIfResult& r) {
  return {{"user", r.user},
          {"before", view_json(r.before)},
          {"after", view_json(r.after)},
          {"sgprs_stale", r.sgprs_stale}};
}

json to_json(const NeighborSubgraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes)
    nodes.push_back({{"id", n.id},
                     {"depth", n.depth},
                     {"sgprs", n.sgprs},
                     {"sgprs_raw", n.sgprs_raw},
                     {"r_struct", n.r_struct},
                     {"r_imp", n.r_imp},
                     {"neighbor_risk", n.neighbor_risk}});
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"truncated", g.truncated}};
}

json to_json(const ComponentSummary& s, std::span<const ScenarioRow> rows) {
  const auto dist = [](const ComponentDistribution& d) {
    return json{{"min", d.min}, {"mean", d.mean}, {"max", d.max}};
  };
  json scenarios = json::array();
  for (const auto& row : rows)
    scenarios.push_back({{"name", row.scenario.name},
                         {"weights",
                          {row.scenario.weights.aprs, row.scenario.weights.sgprs,
                           row.scenario.weights.cbprs}},
                         {"cprs", row.cprs}});
  return {{"aprs", dist(s.aprs)},
          {"sgprs", dist(s.sgprs)},
          {"cbprs", dist(s.cbprs)},
          {"scenarios", std::move(scenarios)}};
}

json content_json(const Snapshot& s, UserId user) {
  const auto idx = s.dataset->graph.find(user);
  if (!idx) throw NotFoundError("unknown user " + std::to_string(user));
  const auto& table = s.config.sensitivity;
  json posts = json::array();
  for (auto i : s.contributing_posts[*idx]) {
    const auto& post = s.dataset->posts[i];
    const auto& risk = s.post_risk[i];
    const auto& analysis = s.post_analysis[i];
    json entities = json::array();
    for (const auto& e : analysis.text_entities) entities.push_back(entity_json(e, table));
    json comments = json::array();
    for (std::size_t k = 0; k < post.comments.size(); ++k) {
      json ce = json::array();
      for (const auto& e : analysis.comment_entities[k]) ce.push_back(entity_json(e, table));
      comments.push_back({{"id", post.comments[k].id},
                          {"author", post.comments[k].author},
                          {"text", post.comments[k].text},
                          {"entities", std::move(ce)},
                          {"sensitivity", risk.comments.comments[k].sensitivity},
                          {"risk", risk.comments.comments[k].risk}});
    }
    posts.push_back({{"id", post.id},
                     {"author", post.author},
                     {"text", post.text},
                     {"timestamp", post.timestamp},
                     {"visibility", std::string(to_string(post.visibility_setting.level))},
                     {"visibility_factor", risk.visibility},
                     {"entities", std::move(entities)},
                     {"sensitivity", risk.sensitivity},
                     {"post_risk", risk.risk},
                     {"comment_risk", risk.comments.total},
                     {"total_risk", risk.total},
                     {"contribution", s.contribution(i, risk, user)},
                     {"comments", std::move(comments)}});
  }
  return {{"user", user}, {"cbprs_raw", s.cbprs_raw[*idx]}, {"cbprs", s.cbprs[*idx]},
          {"posts", std::move(posts)}};
}

void write_reports(std::ostream& out, const Snapshot& s) {
  for (const auto& r : s.reports) out << to_json(r).dump() << '\n';
}

void write_summary(std::ostream& out, const ComponentSummary& s) {
  out << "component\tmin\tmean\tmax\n";
  const auto row = [&](const char* name, const ComponentDistribution& d) {
    out << name << '\t' << fixed6(d.min) << '\t' << fixed6(d.mean) << '\t' << fixed6(d.max) << '\n';
  };
  row("APRS", s.aprs);
  row("SGPRS", s.sgprs);
  row("CBPRS", s.cbprs);
}

void write_scenarios(std::ostream& out, std::span<const ScenarioRow> rows,
                     const ComponentSummary& s) {
  out << "scenario\tw_aprs\tw_sgprs\tw_cbprs\taprs\tsgprs\tcbprs\tcprs\n";
  for (const auto& row : rows) {
    const auto& w = row.scenario.weights;
    out << row.scenario.name << '\t' << fixed6(w.aprs) << '\t' << fixed6(w.sgprs) << '\t'
        << fixed6(w.cbprs) << '\t' << fixed6(s.aprs.mean) << '\t' << fixed6(s.sgprs.mean) << '\t'
        << fixed6(s.cbprs.mean) << '\t' << fixed6(row.cprs) << '\n';
  }
}

void write_graph_scores(std::ostream& out, const Snapshot& s) {
  out << "user_id\tr_struct\tr_imp\tsgprs\n";
  const auto& graph = s.dataset->graph;
  for (std::size_t u = 0; u < graph.node_count(); ++u)
    out << graph.id_of(static_cast<SocialGraph::Index>(u)) << '\t' << fixed6(s.r_struct[u]) << '\t'
        << fixed6(s.r_imp[u]) << '\t' << fixed6(s.sgprs[u]) << '\n';
}

void write_entities(std::ostream& out, const Snapshot& s) {
  out << "post_id\tcomment_id\ttype\tstart\tend\tsurface\tsensitivity\n";
  const auto& table = s.config.sensitivity;
  const auto row = [&](const std::string& post, const std::string& comment,
                       const SensitiveEntity& e) {
    out << post << '\t' << comment << '\t' << e.entity_type << '\t' << e.start << '\t' << e.end
        << '\t' << e.surface << '\t'
        << fixed6(table.contains(e.entity_type) ? table.at(e.entity_type) : 0.0) << '\n';
  };
  for (std::size_t i = 0; i < s.dataset->posts.size(); ++i) {
    const auto& post = s.dataset->posts[i];
    for (const auto& e : s.post_analysis[i].text_entities) row(post.id, "", e);
    for (std::size_t k = 0; k < post.comments.size(); ++k)
      for (const auto& e : s.post_analysis[i].comment_entities[k]) row(post.id, post.comments[k].id, e);
  }
}

void export_snapshot(const std::filesystem::path& dir, const Snapshot& s,
                     const ExportOptions& options) {
  std::filesystem::create_directories(dir);
  std::vector<ScenarioRow> rows = s.scenario_rows;
  if (options.scenario) {
    std::erase_if(rows, [&](const ScenarioRow& r) { return r.scenario.name != *options.scenario; });
    if (rows.empty()) throw PreconditionError("unknown scenario '" + *options.scenario + "'");
  }
  write_file(dir / "reports.jsonl", [&](std::ostream& out) { write_reports(out, s); });
  write_file(dir / "summary.tsv", [&](std::ostream& out) { write_summary(out, s.summary); });
  write_file(dir / "cprs.tsv", [&](std::ostream& out) { write_scenarios(out, rows, s.summary); });
  if (options.graph_scores)
    write_file(dir / "graph_scores.tsv", [&](std::ostream& out) { write_graph_scores(out, s); });
  if (options.entities)
    write_file(dir / "entities.tsv", [&](std::ostream& out) { write_entities(out, s); });
  if (s.graph_scores.similarity.scope() == SimRankParams::PairScope::NeighborsOnly) {
    std::filesystem::create_directories(dir / "cache");
    save_graph_cache(dir / "cache" / "graph_scores.json", s.dataset->graph, s.graph_scores);
  }
}

void save_graph_cache(const std::filesystem::path& path, const SocialGraph& graph,
                      const GraphScores& scores) {
  if (scores.similarity.scope() != SimRankParams::PairScope::NeighborsOnly) return;
  const auto values = scores.similarity.edge_values();
  json j{{"fingerprint", std::to_string(scores.fingerprint)},
         {"nodes", graph.node_count()},
         {"simrank_iterations", scores.similarity.iterations()},
         {"pagerank_iterations", scores.pagerank_iterations},
         {"similarity", std::vector<double>(values.begin(), values.end())},
         {"pagerank", scores.pagerank}};
  write_file(path, [&](std::ostream& out) { out << j.dump(); });
}

std::optional<GraphScores> load_graph_cache(const std::filesystem::path& path,
                                            const SocialGraph& graph, std::uint64_t fingerprint) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("fingerprint").get<std::string>() != std::to_string(fingerprint)) return std::nullopt;
    if (j.at("nodes").get<std::size_t>() != graph.node_count()) return std::nullopt;
    auto values = j.at("similarity").get<std::vector<double>>();
    auto pr = j.at("pagerank").get<std::vector<double>>();
    if (values.size() != 2 * graph.edge_count() || pr.size() != graph.node_count())
      return std::nullopt;
    GraphScores scores;
    scores.similarity = SimilarityMap::from_edge_values(graph, std::move(values),
                                                        j.at("simrank_iterations").get<int>());
    scores.pagerank = std::move(pr);
    scores.pagerank_iterations = j.at("pagerank_iterations").get<int>();
    scores.fingerprint = fingerprint;
    return scores;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace privrisk
