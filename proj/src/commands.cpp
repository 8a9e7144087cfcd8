#include "privrisk/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "privrisk/export.hpp"
#include "privrisk/ingest.hpp"
#include "privrisk/random.hpp"
#include "privrisk/service.hpp"

namespace privrisk {

using nlohmann::json;

namespace {

// Independent RNG streams derived from the run seed.
enum Stream : std::uint64_t { kGraphStream = 1, kProfileStream, kPostStream, kSampleStream, kAuthorStream };

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const PreconditionError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NotFoundError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

DatasetManifest manifest_with_seed(const std::filesystem::path& path,
                                   std::optional<std::uint64_t> seed) {
  auto m = load_manifest(path);
  if (seed) m.seed = *seed;
  return m;
}

void write_text(const std::filesystem::path& path, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::filesystem::filesystem_error("cannot write", path,
                                            std::make_error_code(std::errc::io_error));
  writer(out);
  if (!out)
    throw std::filesystem::filesystem_error("write failed", path,
                                            std::make_error_code(std::errc::io_error));
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::filesystem::filesystem_error("cannot open manifest", path,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  DatasetManifest m;
  try {
    const auto& g = j.at("graph");
    if (g.is_string()) {
      m.graph = resolve(base, g.get<std::string>());
    } else {
      if (g.value("model", std::string("community")) != "community")
        throw DataError(path.string() + ": unknown graph model");
      m.graph_model.nodes = g.value("nodes", m.graph_model.nodes);
      m.graph_model.edges = g.value("edges", m.graph_model.edges);
      m.graph_model.communities = g.value("communities", m.graph_model.communities);
      m.graph_model.cross_fraction = g.value("cross_fraction", m.graph_model.cross_fraction);
    }
    if (j.contains("profiles")) m.profiles = resolve(base, j["profiles"].get<std::string>());
    if (j.contains("posts")) m.posts = resolve(base, j["posts"].get<std::string>());
    if (j.contains("config")) m.config = resolve(base, j["config"].get<std::string>());
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("generate")) {
      const auto& gen = j["generate"];
      auto& sp = m.synthetic_posts;
      sp.count = gen.value("synthetic_posts", sp.count);
      sp.max_comments = gen.value("max_comments", sp.max_comments);
      sp.start_epoch = gen.value("start_epoch", sp.start_epoch);
      sp.months = gen.value("months", sp.months);
      if (gen.contains("sample_posts")) m.sample_posts = gen["sample_posts"].get<std::size_t>();
      m.reassign_authors = gen.value("reassign_authors", false);
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return m;
}

EngineConfig resolve_config(const DatasetManifest& manifest) {
  if (const char* env = std::getenv(kConfigEnv); env && *env) return load_config(env);
  if (manifest.config) return load_config(*manifest.config);
  return EngineConfig::defaults();
}

Dataset build_dataset(const DatasetManifest& m, const EngineConfig& config) {
  SocialGraph graph = m.graph ? load_edge_list(*m.graph)
                              : generate_community_graph(m.graph_model, mix_seed(m.seed, kGraphStream));
  const auto users = graph.ids();

  std::vector<Post> posts;
  if (m.posts) {
    posts = load_posts(*m.posts, config.default_post_visibility);
    if (m.reassign_authors) posts = assign_posts_round_robin(posts, users, mix_seed(m.seed, kAuthorStream));
  } else {
    posts = generate_synthetic_posts(m.synthetic_posts, users, mix_seed(m.seed, kPostStream));
  }
  if (m.sample_posts) posts = temporal_uniform_sample(posts, *m.sample_posts, mix_seed(m.seed, kSampleStream));

  if (!m.profiles) {
    auto profiles = generate_synthetic_profiles(graph, config.homophily, mix_seed(m.seed, kProfileStream));
    return Dataset::assemble(std::move(graph), std::move(profiles), std::move(posts));
  }
  auto rows = load_profile_rows(*m.profiles);
  const auto report = validate_dataset(rows, graph, posts);
  if (!report.valid()) {
    std::string message = "dataset validation failed:";
    for (const auto& f : report.findings) message += "\n  " + f.message;
    throw DataError(message);
  }
  return Dataset::assemble(std::move(graph), std::move(rows), std::move(posts));
}

std::shared_ptr<const Snapshot> score_manifest(const DatasetManifest& manifest, unsigned jobs,
                                               const std::filesystem::path& cache_dir) {
  const auto config = resolve_config(manifest);
  auto dataset = std::make_shared<const Dataset>(build_dataset(manifest, config));
  ScoreOptions options;
  options.jobs = jobs;
  if (!cache_dir.empty())
    options.cached_graph = load_graph_cache(
        cache_dir / "graph_scores.json", dataset->graph,
        graph_fingerprint(dataset->graph, config.simrank, config.pagerank));
  return score_dataset(std::move(dataset), config, options);
}

SettingChange parse_change(std::string_view spec, SettingChange::Target target) {
  const auto eq = spec.rfind('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == spec.size())
    throw DataError("change '" + std::string(spec) + "' must look like name=level");
  SettingChange change;
  change.target = target;
  change.item = std::string(spec.substr(0, eq));
  change.setting = parse_privacy_level(spec.substr(eq + 1));
  return change;
}

int cmd_score(const ScoreCommand& cmd, std::ostream& log) {
  return guarded(log, [&] {
    const auto manifest = manifest_with_seed(cmd.manifest, cmd.seed);
    const auto snapshot = score_manifest(manifest, cmd.jobs, cmd.out / "cache");
    ExportOptions options;
    options.graph_scores = options.entities = cmd.extras;
    options.scenario = cmd.scenario;
    export_snapshot(cmd.out, *snapshot, options);
    log << "scored " << snapshot->reports.size() << " users, " << snapshot->dataset->posts.size()
        << " posts -> " << cmd.out.string() << '\n';
    return int{kExitOk};
  });
}

int cmd_generate(const GenerateCommand& cmd, std::ostream& log) {
  return guarded(log, [&] {
    const auto manifest = manifest_with_seed(cmd.manifest, cmd.seed);
    const auto config = resolve_config(manifest);
    const auto dataset = build_dataset(manifest, config);
    std::filesystem::create_directories(cmd.out);
    write_text(cmd.out / "graph.txt", [&](std::ostream& o) { write_edge_list(o, dataset.graph); });
    write_text(cmd.out / "profiles.tsv",
               [&](std::ostream& o) { write_profiles(o, dataset.profiles, config.attributes); });
    write_text(cmd.out / "posts.jsonl", [&](std::ostream& o) { write_posts(o, dataset.posts); });
    log << "generated " << dataset.graph.node_count() << " profiles, " << dataset.posts.size()
        << " posts -> " << cmd.out.string() << '\n';
    return int{kExitOk};
  });
}

int cmd_whatif(const WhatIfCommand& cmd, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    std::vector<SettingChange> changes;
    for (const auto& c : cmd.attribute_changes)
      changes.push_back(parse_change(c, SettingChange::Target::Attribute));
    for (const auto& c : cmd.post_changes) changes.push_back(parse_change(c, SettingChange::Target::Post));
    const auto manifest = manifest_with_seed(cmd.manifest, cmd.seed);
    const auto snapshot = score_manifest(manifest, cmd.jobs, cmd.out / "cache");
    const auto result = what_if(*snapshot, cmd.user, changes, cmd.recompute_structural);
    out << to_json(result).dump(2) << '\n';
    return int{kExitOk};
  });
}

int cmd_serve(const ServeCommand& cmd, std::ostream& log) {
  return guarded(log, [&] {
    const auto manifest = manifest_with_seed(cmd.manifest, cmd.seed);
    Service service;
    service.publish(score_manifest(manifest, cmd.jobs, cmd.out / "cache"));
    if (cmd.static_dir) service.mount_static(*cmd.static_dir);
    log << "serving on http://" << cmd.host << ':' << cmd.port << '\n';
    service.run(cmd.host, cmd.port);
    return int{kExitOk};
  });
}

}  // namespace privrisk
