// privrisk: generate, score, what-if and serve from a dataset manifest.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "privrisk/commands.hpp"

int main(int argc, char** argv) {
  using namespace privrisk;
  CLI::App app{"Privacy risk scoring for social-network datasets"};
  app.require_subcommand(1, 1);

  std::filesystem::path manifest;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  int verbosity = 0;
  const auto common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--manifest", manifest, "dataset manifest (JSON)")->required();
    auto* o = sub->add_option("--out", out, needs_out ? "output directory" : "directory holding the graph cache");
    if (needs_out) o->required();
    sub->add_option("--seed", seed, "override the manifest seed");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
  };
  app.add_flag("-v,--verbose", verbosity, "log progress to stderr");

  auto* generate = app.add_subcommand("generate", "write synthetic profiles and sampled posts");
  common(generate, true);

  ScoreCommand score;
  auto* score_cmd = app.add_subcommand("score", "score every user and export reports and summaries");
  common(score_cmd, true);
  score_cmd->add_option("--scenario", score.scenario, "restrict the CPRS table to one scenario");
  score_cmd->add_flag("--extras", score.extras, "also write graph_scores.tsv and entities.tsv");

  WhatIfCommand whatif;
  auto* whatif_cmd = app.add_subcommand("whatif", "recompute one user's scores after setting changes");
  common(whatif_cmd, false);
  whatif_cmd->add_option("--user", whatif.user, "user id")->required();
  whatif_cmd->add_option("--set", whatif.attribute_changes, "attribute change, e.g. Email=only_me");
  whatif_cmd->add_option("--post-visibility", whatif.post_changes, "post change, e.g. p17=friends");
  bool frozen = false;
  whatif_cmd->add_flag("--no-struct", frozen, "carry SGPRS over instead of recomputing structural risk");

  ServeCommand serve;
  auto* serve_cmd = app.add_subcommand("serve", "serve the HTTP API over a scored snapshot");
  common(serve_cmd, false);
  if (const char* env = std::getenv("PRIVRISK_PORT")) serve.port = std::atoi(env);
  serve_cmd->add_option("--host", serve.host, "bind address");
  serve_cmd->add_option("--port", serve.port, "TCP port (env PRIVRISK_PORT)");
  serve_cmd->add_option("--static", serve.static_dir, "dashboard build directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitValidation;
  }

  std::ostream& log = std::cerr;
  if (verbosity > 0) log << "manifest " << manifest.string() << '\n';
  if (generate->parsed()) return cmd_generate({manifest, out, seed}, log);
  if (score_cmd->parsed()) {
    score.manifest = manifest;
    score.out = out;
    score.seed = seed;
    score.jobs = jobs;
    return cmd_score(score, log);
  }
  if (whatif_cmd->parsed()) {
    whatif.manifest = manifest;
    whatif.out = out;
    whatif.seed = seed;
    whatif.jobs = jobs;
    whatif.recompute_structural = !frozen;
    return cmd_whatif(whatif, std::cout, log);
  }
  serve.manifest = manifest;
  serve.out = out;
  serve.seed = seed;
  serve.jobs = jobs;
  return cmd_serve(serve, log);
}
