#include <charconv>
#include <cmath>
#include <cstdio>

#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"
#include "paracons/retrieval.hpp"
#include "paracons/rng.hpp"

namespace paracons {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("mock scorer: bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

bool parse_flag(std::string_view s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ValidationError("mock scorer: bad boolean '" + std::string(s) + "'");
}

// Scores for "winner on top, everything else strictly below".
std::vector<double> winner_scores(std::size_t n, std::size_t winner, Rng& rng) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i == winner ? 0.0 : -1.0 - rng.uniform();
  return s;
}

std::size_t index_of(std::span<const std::string> cands, std::string_view v) {
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (cands[i] == v) return i;
  return cands.size();
}

std::size_t argmax_first(const std::vector<double>& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] > s[best]) best = i;
  return best;
}

}  // namespace

std::string MockConfig::canonical() const {
  std::string s;
  switch (kind) {
    case MockKind::kOracle: s = "oracle"; break;
    case MockKind::kHash: s = "hash"; break;
    case MockKind::kParametric: s = "parametric:" + fmt_double(q); break;
    case MockKind::kFixed: s = "fixed:" + fixed_answer; break;
    case MockKind::kReader: s = "reader"; break;
  }
  s += "?reuse=" + fmt_double(reuse) + "&hub=" + (hub ? "1" : "0") +
       "&dim=" + std::to_string(embedding_dim) + "&free=" + (free_generation ? "1" : "0") +
       "&ignore_forced=" + (ignore_forced ? "1" : "0");
  return s;
}

MockConfig parse_mock_spec(std::string_view spec) {
  MockConfig cfg;
  std::string_view head = spec;
  std::string_view params;
  if (auto q = spec.find('?'); q != std::string_view::npos) {
    head = spec.substr(0, q);
    params = spec.substr(q + 1);
  }
  std::string_view name = head;
  std::string_view arg;
  bool has_arg = false;
  if (auto c = head.find(':'); c != std::string_view::npos) {
    name = head.substr(0, c);
    arg = head.substr(c + 1);
    has_arg = true;
  }
  if (name == "oracle") {
    cfg.kind = MockKind::kOracle;
  } else if (name == "hash") {
    cfg.kind = MockKind::kHash;
  } else if (name == "parametric") {
    cfg.kind = MockKind::kParametric;
    if (!has_arg) throw ValidationError("mock scorer: parametric requires q, e.g. parametric:0.9");
    cfg.q = parse_double(arg, "q");
    if (!(cfg.q >= 0.0 && cfg.q <= 1.0))
      throw ValidationError("mock scorer: parametric q must lie in [0, 1]");
  } else if (name == "fixed") {
    cfg.kind = MockKind::kFixed;
    if (!has_arg || arg.empty())
      throw ValidationError("mock scorer: fixed requires an answer, e.g. fixed:London");
    cfg.fixed_answer = std::string(arg);
  } else if (name == "reader") {
    cfg.kind = MockKind::kReader;
  } else {
    throw ValidationError("unknown mock scorer kind '" + std::string(name) + "'");
  }
  if (has_arg && (cfg.kind == MockKind::kOracle || cfg.kind == MockKind::kHash ||
                  cfg.kind == MockKind::kReader))
    throw ValidationError("mock scorer: '" + std::string(name) + "' takes no argument");

  while (!params.empty()) {
    auto amp = params.find('&');
    std::string_view kv = params.substr(0, amp);
    params = amp == std::string_view::npos ? std::string_view{} : params.substr(amp + 1);
    auto eq = kv.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("mock scorer: bad option '" + std::string(kv) + "'");
    std::string_view key = kv.substr(0, eq);
    std::string_view val = kv.substr(eq + 1);
    if (key == "reuse") {
      cfg.reuse = parse_double(val, "reuse");
      if (!(cfg.reuse >= 0.0 && cfg.reuse <= 1.0))
        throw ValidationError("mock scorer: reuse must lie in [0, 1]");
    } else if (key == "hub") {
      cfg.hub = parse_flag(val);
    } else if (key == "dim") {
      cfg.embedding_dim = static_cast<int>(parse_double(val, "dim"));
      if (cfg.embedding_dim < 0) throw ValidationError("mock scorer: dim must be >= 0");
    } else if (key == "free") {
      cfg.free_generation = parse_flag(val);
    } else if (key == "ignore_forced") {
      cfg.ignore_forced = parse_flag(val);
    } else {
      throw ValidationError("mock scorer: unknown option '" + std::string(key) + "'");
    }
  }
  return cfg;
}

MockScorer::MockScorer(MockConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {}

std::string MockScorer::identity() const { return "mock:" + config_.canonical(); }

std::vector<ScoreResponse> MockScorer::score(std::span<const ScoreJob> jobs) {
  std::vector<ScoreResponse> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) out.push_back(score_one(job));
  return out;
}

// Shared passages of a tuple mention the gold answer once each. A slot that
// is not shared gets a paraphrase-specific passage mentioning a random
// candidate; with probability 1/2 it sits on the same page (title) as the
// shared passage of that slot.
std::vector<Passage> MockScorer::retrieve(const QueryContext& ctx,
                                          std::span<const std::string> candidates,
                                          int n_passages) const {
  std::vector<Passage> out;
  out.reserve(static_cast<std::size_t>(std::max(n_passages, 0)));
  const std::string tpl = std::to_string(ctx.template_index);
  for (int k = 0; k < n_passages; ++k) {
    const std::string slot = std::to_string(k);
    if (config_.hub && k == 0) {
      out.push_back({ctx.relation_id + "/hub", ctx.relation_id + " overview",
                     ctx.relation_id + " overview. General background."});
      continue;
    }
    const std::string page = ctx.subject + " (" + std::to_string(k / 2) + ")";
    Rng rng = Rng::keyed(seed_, {"retrieve", ctx.relation_id, ctx.subject, tpl, slot});
    if (rng.uniform() < config_.reuse) {
      out.push_back({ctx.relation_id + "/" + ctx.subject + "#" + slot, page,
                     page + ". " + ctx.subject + " " + ctx.gold + "."});
    } else {
      const bool same_page = rng.uniform() < 0.5;
      const std::string& other = candidates[rng.below(candidates.size())];
      const std::string title =
          same_page ? page : ctx.subject + " (alt " + tpl + "." + slot + ")";
      out.push_back({ctx.relation_id + "/" + ctx.subject + "@" + tpl + "#" + slot, title,
                     title + ". " + ctx.subject + " " + other + "."});
    }
  }
  return out;
}

std::vector<double> MockScorer::embed(const QueryContext& ctx) const {
  const auto dim = static_cast<std::size_t>(config_.embedding_dim);
  std::vector<double> e(dim, 0.0);
  Rng subj = Rng::keyed(seed_, {"embed", ctx.relation_id, ctx.subject});
  Rng rel = Rng::keyed(seed_, {"embed-relation", ctx.relation_id});
  Rng noise = Rng::keyed(seed_, {"embed-noise", ctx.relation_id, ctx.subject,
                                 std::to_string(ctx.template_index)});
  const double noise_scale = 1.0 - config_.reuse;
  for (std::size_t i = 0; i < dim; ++i) {
    e[i] = (2.0 * subj.uniform() - 1.0) + 0.5 * (2.0 * rel.uniform() - 1.0);
    const double n = 2.0 * noise.uniform() - 1.0;
    e[i] += noise_scale * n;
  }
  return e;
}

ScoreResponse MockScorer::score_one(const ScoreJob& job) const {
  const ScoreRequest& req = job.request;
  ScoreResponse resp;
  resp.request_id = req.request_id;
  const std::size_t n = req.candidates.size();
  if (n == 0) {
    resp.error = "empty candidate list";
    return resp;
  }
  const QueryContext* ctx = job.context ? &*job.context : nullptr;

  std::optional<std::vector<Passage>> passages;
  if (req.forced_passages) {
    resp.forced_passages_applied = !config_.ignore_forced;
    if (!config_.ignore_forced) passages = *req.forced_passages;
  }
  if (!passages && req.want_retrieval && ctx)
    passages = retrieve(*ctx, req.candidates, req.n_passages);

  const std::string tpl = ctx ? std::to_string(ctx->template_index) : std::string{};
  switch (config_.kind) {
    case MockKind::kOracle: {
      if (!ctx) {
        resp.error = "oracle mock needs the query's gold answer (unknown prompt)";
        return resp;
      }
      const std::size_t g = index_of(req.candidates, ctx->gold);
      Rng rng = Rng::keyed(seed_, {"oracle", ctx->relation_id, ctx->subject, tpl});
      resp.scores = winner_scores(n, g < n ? g : 0, rng);
      break;
    }
    case MockKind::kHash: {
      resp.scores.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::string key = req.prompt;
        key.push_back('\0');
        key += req.candidates[i];
        const double u =
            (static_cast<double>(hash64(key, seed_) >> 11) + 0.5) * 0x1.0p-53;
        resp.scores[i] = std::log(u);
      }
      break;
    }
    case MockKind::kParametric: {
      if (!ctx) {
        resp.error = "parametric mock needs the query's gold answer (unknown prompt)";
        return resp;
      }
      std::size_t g = index_of(req.candidates, ctx->gold);
      if (g >= n) g = 0;
      Rng rng = Rng::keyed(seed_, {"parametric", ctx->relation_id, ctx->subject, tpl});
      std::size_t winner = g;
      if (n > 1 && rng.uniform() >= config_.q) {
        winner = rng.below(n - 1);
        if (winner >= g) ++winner;
      }
      resp.scores = winner_scores(n, winner, rng);
      break;
    }
    case MockKind::kFixed: {
      const std::size_t f = index_of(req.candidates, config_.fixed_answer);
      resp.scores.assign(n, -1.0);
      if (f < n) resp.scores[f] = 0.0;
      break;
    }
    case MockKind::kReader: {
      const std::vector<Passage> none;
      const auto freq = candidate_frequencies(passages ? *passages : none, req.candidates);
      resp.scores.assign(freq.begin(), freq.end());
      break;
    }
  }

  if (req.want_retrieval) {
    resp.passages = passages ? std::move(passages) : std::vector<Passage>{};
    if (ctx && config_.embedding_dim > 0) resp.query_embedding = embed(*ctx);
  }
  if (config_.free_generation) resp.free_generation = req.candidates[argmax_first(resp.scores)];
  return resp;
}

}  // namespace paracons
