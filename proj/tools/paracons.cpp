// paracons: curate, evaluate and analyze paraphrase-consistency runs.

#include <iostream>

#include "CLI11.hpp"
#include "paracons/app.hpp"
#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"

namespace {

using paracons::ExitCode;
using paracons::app::Config;

void add_common(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--data", cfg.data, "Dataset directory (one JSONL file per relation)")
      ->required();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--mask-token", cfg.mask_token, "Token substituted for [Y]")
      ->capture_default_str();
}

void add_out(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--out", cfg.out, "Output directory")->required();
  cmd->add_option("--format", cfg.formats, "Report formats: text, json, csv")
      ->delimiter(',')
      ->capture_default_str();
}

void add_analysis(CLI::App* cmd, Config& cfg) {
  add_common(cmd, cfg);
  add_out(cmd, cfg);
  cmd->add_option("--cache", cfg.cache, "Baseline prediction cache")->required();
  cmd->add_option("--label", cfg.label, "Model label in report rows");
  cmd->add_option("--baseline-samples", cfg.baseline_samples,
                  "Random-baseline pairs per relation")
      ->capture_default_str();
}

void add_scoring(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--endpoint", cfg.endpoint, "mock:NAME | exec:CMD | http:URL")->required();
  cmd->add_option("--n-passages", cfg.n_passages, "Passages per query (0 disables retrieval)")
      ->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size)->capture_default_str();
  cmd->add_option("--concurrency", cfg.concurrency)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Paraphrase-consistency evaluation harness"};
  cli.require_subcommand(1);
  Config cfg;

  auto* curate = cli.add_subcommand("curate", "Deduplicate a dataset and write the curated copy");
  add_common(curate, cfg);
  add_out(curate, cfg);
  curate->add_option("--drop-threshold", cfg.drop_threshold,
                     "Drop relations whose duplicate rate exceeds this")
      ->capture_default_str();
  curate->add_flag("!--no-known-flags", cfg.known_flags,
                   "Do not merge the built-in data-issue annotations");

  auto* evaluate = cli.add_subcommand("evaluate", "Score every query into a prediction cache");
  add_common(evaluate, cfg);
  add_out(evaluate, cfg);
  add_scoring(evaluate, cfg);
  evaluate->add_option("--cache", cfg.cache, "Cache path (default OUT/predictions.jsonl)");

  auto* analyze = cli.add_subcommand("analyze", "Consistency, knowledge and stratified tables");
  add_analysis(analyze, cfg);

  auto* intervene = cli.add_subcommand("intervene", "Re-score with forced passages");
  add_analysis(intervene, cfg);
  add_scoring(intervene, cfg);
  intervene->add_option("--mode", cfg.mode, "relevant | irr_cohesive | irr_incohesive | all")
      ->default_str("all");

  auto* retriever = cli.add_subcommand("retriever-metrics", "Retriever consistency tables");
  add_analysis(retriever, cfg);

  auto* rank = cli.add_subcommand("rank-report", "Frequency-rank tables");
  add_analysis(rank, cfg);

  std::string serve_spec = "mock:oracle";
  bool serve_stdio = false;
  int serve_port = 0;
  auto* serve = cli.add_subcommand("serve", "Serve a mock scorer over the wire protocol");
  add_common(serve, cfg);
  serve->add_option("--endpoint", serve_spec, "Mock to serve (mock:NAME?...)")
      ->capture_default_str();
  auto* stdio_opt = serve->add_flag("--stdio", serve_stdio, "JSONL on stdin/stdout");
  auto* http_opt = serve->add_option("--http", serve_port, "Listen on 127.0.0.1:PORT");
  stdio_opt->excludes(http_opt);
  http_opt->excludes(stdio_opt);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    paracons::app::Outcome out;
    if (*curate) out = paracons::app::cmd_curate(cfg);
    else if (*evaluate) out = paracons::app::cmd_evaluate(cfg);
    else if (*analyze) out = paracons::app::cmd_analyze(cfg);
    else if (*intervene) out = paracons::app::cmd_intervene(cfg);
    else if (*retriever) out = paracons::app::cmd_retriever_metrics(cfg);
    else if (*rank) out = paracons::app::cmd_rank_report(cfg);
    else if (*serve) {
      if (!serve_stdio && serve_port == 0) {
        std::cerr << "serve: pass --stdio or --http PORT\n";
        return static_cast<int>(ExitCode::kUsage);
      }
      const auto ds = paracons::load_dataset(cfg.data);
      std::string spec = serve_spec;
      if (spec.rfind("mock:", 0) == 0) spec = spec.substr(5);
      paracons::app::MockServer server(ds, spec, cfg.seed, cfg.mask_token);
      if (serve_stdio) server.serve_stream(std::cin, std::cout);
      else server.serve_http(serve_port);
      return 0;
    }
    std::cout << out.summary << (out.summary.ends_with('\n') ? "" : "\n");
    for (const auto& a : out.artifacts) std::cout << "  " << a.string() << "\n";
    return 0;
  } catch (const paracons::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kValidation);
  }
}
