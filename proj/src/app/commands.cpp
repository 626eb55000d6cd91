#include <algorithm>
#include <chrono>
#include <charconv>
#include <iostream>
#include <map>

#include "httplib.h"
#include "json.hpp"

#include "paracons/app.hpp"
#include "paracons/digest.hpp"
#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"
#include "paracons/fileio.hpp"
#include "paracons/report.hpp"
#include "paracons/scoring.hpp"

namespace paracons::app {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool wants(const Config& cfg, std::string_view format) {
  for (const auto& f : cfg.formats) {
    if (f == format) return true;
  }
  return false;
}

void check_formats(const Config& cfg) {
  for (const auto& f : cfg.formats) {
    if (f != "text" && f != "json" && f != "csv")
      throw ValidationError("unknown format '" + f + "' (expected text, json or csv)");
  }
}

// Collects tables and writes them as <stem>.txt, <stem>.json and <id>.csv.
class ReportWriter {
 public:
  ReportWriter(const Config& cfg, std::string stem, ordered_json meta)
      : cfg_(cfg), stem_(std::move(stem)), json_(std::move(meta)) {
    text_ = "run_digest: " + json_.value("run_digest", std::string()) +
            "\nseed: " + std::to_string(json_.value("seed", std::uint64_t{0})) + "\n";
    json_["tables"] = ordered_json::array();
  }

  void add(const Table& t) {
    text_ += "\n" + render_text(t);
    json_["tables"].push_back(to_json(t));
    if (wants(cfg_, "csv")) write(t.id + ".csv", render_csv(t));
  }
  void note(const std::string& line) { text_ += "\n" + line + "\n"; }
  ordered_json& json() { return json_; }

  void write(const std::string& name, const std::string& contents) {
    const auto path = cfg_.out / name;
    write_file_atomic(path, contents);
    artifacts_.push_back(path);
  }

  std::vector<fs::path> finish() {
    if (wants(cfg_, "text")) write(stem_ + ".txt", text_);
    if (wants(cfg_, "json")) write(stem_ + ".json", json_.dump(2) + "\n");
    return artifacts_;
  }

 private:
  const Config& cfg_;
  std::string stem_;
  std::string text_;
  ordered_json json_;
  std::vector<fs::path> artifacts_;
};

ordered_json config_json(const Config& cfg) {
  return {{"data", cfg.data.string()},
          {"out", cfg.out.string()},
          {"cache", cfg.cache.string()},
          {"endpoint", cfg.endpoint},
          {"seed", cfg.seed},
          {"n_passages", cfg.n_passages},
          {"drop_threshold", cfg.drop_threshold},
          {"mode", cfg.mode},
          {"formats", cfg.formats},
          {"mask_token", cfg.mask_token},
          {"known_flags", cfg.known_flags},
          {"batch_size", cfg.batch_size},
          {"concurrency", cfg.concurrency},
          {"baseline_samples", cfg.baseline_samples},
          {"label", cfg.label}};
}

void write_manifest(const Config& cfg, const std::string& command, ordered_json extra,
                    const std::vector<fs::path>& artifacts, ordered_json timings) {
  ordered_json m{{"command", command}, {"config", config_json(cfg)}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  ordered_json sums = ordered_json::object();
  for (const auto& a : artifacts) sums[a.filename().string()] = sha256_file(a.string());
  m["artifacts"] = std::move(sums);
  m["timings_ms"] = std::move(timings);
  write_file_atomic(cfg.out / ("manifest-" + command + ".json"), m.dump(2) + "\n");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

CacheContents load_checked_cache(const Dataset& ds, const fs::path& path) {
  require(!path.empty(), "--cache is required");
  auto cache = read_cache(path);
  const auto digest = dataset_digest(ds);
  if (cache.header.dataset_digest != digest) {
    throw DigestMismatchError("cache " + path.string() + " was produced for dataset digest " +
                              cache.header.dataset_digest + " but --data has digest " + digest);
  }
  return cache;
}

std::string label_for(const Config& cfg, const CacheHeader& h) {
  return cfg.label.empty() ? h.endpoint : cfg.label;
}

struct Analysis {
  EvalSet eval;
  std::vector<std::vector<PairRecord>> pairs;
  std::vector<RelationMetrics> per_relation;
  SummaryMetrics summary;
};

Analysis analyze_predictions(const Dataset& ds, std::span<const Prediction> predictions) {
  Analysis a;
  a.eval = build_eval_set(ds, predictions);
  for (const auto& rel : a.eval.relations) {
    a.pairs.push_back(pair_records(rel));
    a.per_relation.push_back(compute_relation_metrics(rel, a.pairs.back()));
  }
  a.summary = macro_summary(a.per_relation);
  return a;
}

ordered_json meta_for(const CacheHeader& h, const std::string& label) {
  return {{"run_digest", h.run_digest()},
          {"seed", h.seed},
          {"dataset_digest", h.dataset_digest},
          {"endpoint", h.endpoint},
          {"label", label}};
}

void add_retrieval_tables(const Config& cfg, ReportWriter& w, Analysis& a,
                          const std::string& label, bool retriever, bool rank) {
  if (!has_retrieval(a.eval)) {
    w.note("Retrieval tables: absent (the cache holds no passages or query embeddings).");
    w.json()["retrieval"] = nullptr;
    return;
  }
  const auto stats = annotate_pairs(a.eval, a.pairs);
  ordered_json r{{"count_mismatches", stats.count_mismatches},
                 {"pairs_with_passages", stats.pairs_with_passages},
                 {"pairs_with_embeddings", stats.pairs_with_embeddings}};
  if (retriever) {
    std::vector<BaselineResult> baselines{
        random_baseline(a.eval, BaselineMode::kAll, cfg.baseline_samples, cfg.seed),
        random_baseline(a.eval, BaselineMode::kSubject, cfg.baseline_samples, cfg.seed)};
    const auto rep = retriever_consistency_report(a.eval, a.pairs, baselines, label);
    w.add(retriever_table(rep));
    w.add(match_table(label, rep));
    w.add(correlation_table(rep));
    r["retriever"] = to_json(rep);
    r["baseline_skipped"] = {{"r-all", baselines[0].skipped_relations},
                             {"r-subject", baselines[1].skipped_relations}};
  }
  if (rank) {
    const auto rep = rank_consistency_report(a.pairs);
    w.add(rank_table(label, rep));
    r["rank"] = to_json(rep);
  }
  w.json()["retrieval"] = std::move(r);
}

Dataset load(const Config& cfg) {
  require(!cfg.data.empty(), "--data is required");
  return load_dataset(cfg.data);
}

void prepare_out(const Config& cfg) {
  require(!cfg.out.empty(), "--out is required");
  check_formats(cfg);
  fs::create_directories(cfg.out);
}

}  // namespace

// ---------------------------------------------------------------------------

Outcome cmd_curate(const Config& cfg) {
  const auto t0 = Clock::now();
  prepare_out(cfg);
  auto ds = load(cfg);
  if (cfg.known_flags) {
    for (auto& rel : ds.relations) apply_known_flags(rel.spec);
  }
  const auto result = deduplicate(ds, cfg.drop_threshold);
  write_dataset(result.curated, cfg.out / "data");
  const auto digest = dataset_digest(result.curated);

  ReportWriter w(cfg, "curation",
                 {{"run_digest", digest}, {"seed", cfg.seed}, {"dataset_digest", digest}});
  w.add(curation_table(result.report));
  w.json()["curation"] = to_json(result.report);
  auto artifacts = w.finish();
  for (const auto& rel : result.curated.relations) {
    artifacts.push_back(cfg.out / "data" / (rel.spec.relation_id + ".jsonl"));
  }
  write_manifest(cfg, "curate", {{"dataset_digest", digest}}, artifacts,
                 {{"total", ms_since(t0)}});

  Outcome o;
  o.artifacts = artifacts;
  o.summary = std::to_string(result.report.retained_relations()) + " relations retained, " +
              std::to_string(result.report.total_retained()) + " tuples (of " +
              std::to_string(result.report.total_entries()) + " entries)";
  return o;
}

Outcome cmd_evaluate(const Config& cfg) {
  const auto t0 = Clock::now();
  prepare_out(cfg);
  require(!cfg.endpoint.empty(), "--endpoint is required");
  const auto ds = load(cfg);
  const auto queries = render_all(ds, cfg.mask_token);
  EndpointOptions eo;
  eo.seed = cfg.seed;
  eo.http_concurrency = cfg.concurrency;
  auto endpoint = make_endpoint(cfg.endpoint, eo);

  RunOptions ro;
  ro.seed = cfg.seed;
  ro.n_passages = cfg.n_passages;
  ro.mask_token = cfg.mask_token;
  ro.batch_size = cfg.batch_size;
  ro.concurrency = cfg.concurrency;
  const auto cache_path = cfg.cache.empty() ? cfg.out / "predictions.jsonl" : cfg.cache;
  const auto t1 = Clock::now();
  RunStats stats;
  const auto preds = run_scorer(ds, queries, *endpoint, cache_path, ro, &stats);
  const double scoring_ms = ms_since(t1);

  const auto cache = read_cache(cache_path);
  const auto free = check_free_agreement(ds, preds);
  ordered_json extra{{"dataset_digest", cache.header.dataset_digest},
                     {"endpoint", endpoint->identity()},
                     {"run_digest", cache.header.run_digest()},
                     {"stats",
                      {{"queries", stats.queries},
                       {"cache_hits", stats.cache_hits},
                       {"requests", stats.requests},
                       {"batches", stats.batches},
                       {"retries", stats.retries}}},
                     {"free_agreement",
                      {{"considered", free.considered}, {"matched", free.matched}}}};
  write_manifest(cfg, "evaluate", extra, {cache_path},
                 {{"scoring", scoring_ms}, {"total", ms_since(t0)}});

  Outcome o;
  o.artifacts = {cache_path};
  o.summary = std::to_string(stats.queries) + " queries, " + std::to_string(stats.cache_hits) +
              " cache hits, " + std::to_string(stats.requests) + " requests";
  return o;
}

Outcome cmd_analyze(const Config& cfg) {
  const auto t0 = Clock::now();
  prepare_out(cfg);
  const auto ds = load(cfg);
  const auto cache = load_checked_cache(ds, cfg.cache);
  const auto label = label_for(cfg, cache.header);
  auto a = analyze_predictions(ds, cache.predictions);

  ReportWriter w(cfg, "report", meta_for(cache.header, label));
  w.add(consistency_table(label, a.summary));
  w.add(knowledge_table(label, a.summary));
  w.add(per_relation_table(a.per_relation));
  const auto strata = stratified_consistency(a.eval, a.pairs);
  for (const auto& st : strata) w.add(stratified_table(label, st));
  w.write("strata.csv", strata_csv(label, strata));

  w.json()["summary"] = to_json(a.summary);
  ordered_json rels = ordered_json::array();
  for (const auto& m : a.per_relation) rels.push_back(to_json(m));
  w.json()["relations"] = std::move(rels);
  ordered_json st = ordered_json::array();
  for (const auto& s : strata) st.push_back(to_json(s));
  w.json()["strata"] = std::move(st);
  w.json()["unmatched_predictions"] = a.eval.unmatched_predictions;
  const auto free = check_free_agreement(ds, cache.predictions);
  w.json()["free_agreement"] = {{"considered", free.considered},
                                {"matched", free.matched},
                                {"rate", free.rate() ? ordered_json(*free.rate()) : nullptr}};

  add_retrieval_tables(cfg, w, a, label, true, true);
  auto artifacts = w.finish();
  write_manifest(cfg, "analyze", meta_for(cache.header, label), artifacts,
                 {{"total", ms_since(t0)}});
  Outcome o;
  o.artifacts = artifacts;
  o.summary = label + ": " + format_row(std::vector<std::optional<MeanStd>>{
                                 a.summary.consistency, a.summary.accuracy,
                                 a.summary.consistent_and_accurate}) +
              " (Cons / Acc / C & A)";
  return o;
}

Outcome cmd_retriever_metrics(const Config& cfg) {
  const auto t0 = Clock::now();
  prepare_out(cfg);
  const auto ds = load(cfg);
  const auto cache = load_checked_cache(ds, cfg.cache);
  const auto label = label_for(cfg, cache.header);
  auto a = analyze_predictions(ds, cache.predictions);
  ReportWriter w(cfg, "retriever", meta_for(cache.header, label));
  add_retrieval_tables(cfg, w, a, label, true, false);
  auto artifacts = w.finish();
  write_manifest(cfg, "retriever-metrics", meta_for(cache.header, label), artifacts,
                 {{"total", ms_since(t0)}});
  return {artifacts, "retriever report written"};
}

Outcome cmd_rank_report(const Config& cfg) {
  const auto t0 = Clock::now();
  prepare_out(cfg);
  const auto ds = load(cfg);
  const auto cache = load_checked_cache(ds, cfg.cache);
  const auto label = label_for(cfg, cache.header);
  auto a = analyze_predictions(ds, cache.predictions);
  ReportWriter w(cfg, "rank", meta_for(cache.header, label));
  add_retrieval_tables(cfg, w, a, label, false, true);
  auto artifacts = w.finish();
  write_manifest(cfg, "rank-report", meta_for(cache.header, label), artifacts,
                 {{"total", ms_since(t0)}});
  return {artifacts, "rank report written"};
}

Outcome cmd_intervene(const Config& cfg) {
  const auto t0 = Clock::now();
  prepare_out(cfg);
  require(!cfg.endpoint.empty(), "--endpoint is required");
  const auto ds = load(cfg);
  const auto base = load_checked_cache(ds, cfg.cache);
  const auto label = label_for(cfg, base.header);
  const auto baseline = analyze_predictions(ds, base.predictions);

  std::vector<InterventionMode> modes;
  if (cfg.mode.empty() || cfg.mode == "all") {
    modes = {InterventionMode::kRelevant, InterventionMode::kIrrCohesive,
             InterventionMode::kIrrIncohesive};
  } else {
    modes = {parse_intervention_mode(cfg.mode)};
  }

  EndpointOptions eo;
  eo.seed = cfg.seed;
  eo.http_concurrency = cfg.concurrency;
  auto endpoint = make_endpoint(cfg.endpoint, eo);

  std::vector<InterventionRow> rows{{"none", baseline.summary}};
  std::vector<fs::path> artifacts;
  ordered_json plans = ordered_json::object();
  ordered_json timings = ordered_json::object();
  for (auto mode : modes) {
    const auto t1 = Clock::now();
    const std::string name(intervention_name(mode));
    const auto plan = plan_intervention(baseline.eval, mode, cfg.seed, cfg.n_passages);
    const auto plan_path = cfg.out / ("plan_" + name + ".jsonl");
    write_file_atomic(plan_path, serialize_plan(plan));
    artifacts.push_back(plan_path);

    RunOptions ro;
    ro.seed = cfg.seed;
    ro.mask_token = cfg.mask_token;
    ro.batch_size = cfg.batch_size;
    ro.concurrency = cfg.concurrency;
    const auto cache_path = cfg.out / ("intervention_" + name + ".jsonl");
    const auto preds = run_intervention(ds, plan, *endpoint, cache_path, ro);
    artifacts.push_back(cache_path);
    const auto a = analyze_predictions(ds, preds);
    std::string row_name = name;
    std::replace(row_name.begin(), row_name.end(), '_', ' ');
    rows.push_back({row_name, a.summary});
    plans[name] = {{"digest", plan.digest()},
                   {"entries", plan.entries.size()},
                   {"diagnostics", plan.diagnostics},
                   {"run_digest", read_cache(cache_path).header.run_digest()}};
    timings[name] = ms_since(t1);
  }

  ReportWriter w(cfg, "intervention", meta_for(base.header, label));
  w.add(intervention_table(label, rows));
  ordered_json jrows = ordered_json::array();
  for (const auto& r : rows) jrows.push_back({{"intervention", r.mode}, {"summary", to_json(r.summary)}});
  w.json()["rows"] = std::move(jrows);
  w.json()["plans"] = plans;
  for (auto& p : w.finish()) artifacts.push_back(p);
  timings["total"] = ms_since(t0);
  auto extra = meta_for(base.header, label);
  extra["plans"] = plans;
  write_manifest(cfg, "intervene", extra, artifacts, timings);

  Outcome o;
  o.artifacts = artifacts;
  for (const auto& r : rows) {
    o.summary += r.mode + ": " +
                 format_row(std::vector<std::optional<MeanStd>>{
                     r.summary.consistency, r.summary.accuracy,
                     r.summary.consistent_and_accurate}) +
                 "\n";
  }
  return o;
}

// ---------------------------------------------------------------------------

struct MockServer::Impl {
  const Dataset& dataset;
  MockScorer scorer;
  std::map<std::string, QueryContext, std::less<>> by_prompt;

  Impl(const Dataset& ds, const std::string& spec, std::uint64_t seed, const std::string& mask)
      : dataset(ds), scorer(parse_mock_spec(spec), seed) {
    for (const auto& q : render_all(ds, mask)) by_prompt.emplace(q.prompt, context(q));
  }

  QueryContext context(const Query& q) const {
    const auto& rel = dataset.relations[q.relation_index];
    const auto& t = rel.tuples[q.tuple_index];
    return {rel.spec.relation_id, t.subject, q.template_index, t.object_gold};
  }

  // REL:tuple:template
  std::optional<QueryContext> from_id(std::string_view id) const {
    const auto c2 = id.rfind(':');
    if (c2 == std::string_view::npos || c2 == 0) return std::nullopt;
    const auto c1 = id.rfind(':', c2 - 1);
    if (c1 == std::string_view::npos) return std::nullopt;
    std::size_t tuple = 0, tpl = 0;
    auto parse = [](std::string_view s, std::size_t& v) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size() && !s.empty();
    };
    if (!parse(id.substr(c1 + 1, c2 - c1 - 1), tuple) || !parse(id.substr(c2 + 1), tpl))
      return std::nullopt;
    const auto* rel = dataset.find(id.substr(0, c1));
    if (!rel || tuple >= rel->tuples.size() || tpl >= rel->spec.templates.size())
      return std::nullopt;
    return QueryContext{rel->spec.relation_id, rel->tuples[tuple].subject, tpl,
                        rel->tuples[tuple].object_gold};
  }
};

MockServer::MockServer(const Dataset& dataset, const std::string& mock_spec, std::uint64_t seed,
                       std::string mask_token)
    : impl_(std::make_unique<Impl>(dataset, mock_spec, seed, mask_token)) {}

MockServer::~MockServer() = default;

std::string MockServer::handle_line(std::string_view line) const {
  ScoreJob job;
  try {
    job.request = parse_request(line);
  } catch (const Error& e) {
    ScoreResponse r;
    try {
      r.request_id = nlohmann::json::parse(line).value("request_id", "");
    } catch (...) {
    }
    r.error = e.what();
    return to_line(r);
  }
  job.context = impl_->from_id(job.request.request_id);
  if (!job.context) {
    auto it = impl_->by_prompt.find(job.request.prompt);
    if (it != impl_->by_prompt.end()) job.context = it->second;
  }
  return to_line(impl_->scorer.score_one(job));
}

std::string MockServer::handle_body(std::string_view body) const {
  std::string out;
  for (const auto& line : split_lines(body)) {
    if (line.empty()) continue;
    out += handle_line(line);
    out += '\n';
  }
  return out;
}

void MockServer::serve_stream(std::istream& in, std::ostream& out) const {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out << handle_line(line) << '\n' << std::flush;
  }
}

void MockServer::serve_http(int port) const {
  httplib::Server server;
  server.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    res.set_content(handle_body(req.body), "application/x-ndjson");
  });
  if (!server.listen("127.0.0.1", port)) {
    throw TransportError("cannot listen on 127.0.0.1:" + std::to_string(port));
  }
}

}  // namespace paracons::app
