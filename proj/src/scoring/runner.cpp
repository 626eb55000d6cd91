#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "paracons/error.hpp"
#include "paracons/scoring.hpp"

namespace paracons {

std::string request_id_for(const Dataset& dataset, const Query& q) {
  return dataset.relations[q.relation_index].spec.relation_id + ":" +
         std::to_string(q.tuple_index) + ":" + std::to_string(q.template_index);
}

namespace {

struct Batch {
  std::vector<std::size_t> query_indices;
  std::vector<ScoreJob> jobs;
};

std::vector<ScoreResponse> score_with_retry(Endpoint& endpoint,
                                            std::span<const ScoreJob> jobs,
                                            const RunOptions& options,
                                            std::atomic<std::size_t>& requests,
                                            std::atomic<std::size_t>& retries) {
  auto delay = options.backoff;
  const int attempts = std::max(1, options.max_attempts);
  for (int attempt = 1;; ++attempt) {
    requests += jobs.size();
    try {
      return endpoint.score(jobs);
    } catch (const TransportError& e) {
      if (attempt >= attempts)
        throw TransportError(std::string(e.what()) + " (after " + std::to_string(attempts) +
                             " attempts)");
      ++retries;
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
}

}  // namespace

std::vector<Prediction> run_scorer(const Dataset& dataset, std::span<const Query> queries,
                                   Endpoint& endpoint, const std::filesystem::path& cache_path,
                                   const RunOptions& options, RunStats* stats) {
  CacheHeader header;
  header.endpoint = endpoint.identity();
  header.seed = options.seed;
  header.n_passages = options.n_passages;
  header.dataset_digest = dataset_digest(dataset);
  header.mask_token = options.mask_token;
  header.variant = options.variant;
  PredictionCache cache(cache_path, header);

  std::vector<std::optional<Prediction>> results(queries.size());
  std::vector<Batch> batches;
  const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
  RunStats local;
  local.queries = queries.size();

  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Query& q = queries[i];
    const RelationData& rel = dataset.relations.at(q.relation_index);
    const FactTuple& tuple = rel.tuples.at(q.tuple_index);
    QueryKey key{rel.spec.relation_id, tuple.subject, q.template_index};
    if (const Prediction* hit = cache.find(key)) {
      results[i] = *hit;
      ++local.cache_hits;
      continue;
    }
    ScoreJob job;
    job.request.request_id = request_id_for(dataset, q);
    job.request.prompt = q.prompt;
    job.request.candidates = rel.spec.candidates;
    job.request.want_retrieval = options.n_passages > 0;
    job.request.n_passages = options.n_passages > 0 ? options.n_passages : 1;
    if (options.forced) {
      if (const auto* forced = options.forced(q)) job.request.forced_passages = *forced;
    }
    job.context = QueryContext{rel.spec.relation_id, tuple.subject, q.template_index,
                               tuple.object_gold};
    if (batches.empty() || batches.back().jobs.size() >= batch_size) batches.emplace_back();
    batches.back().query_indices.push_back(i);
    batches.back().jobs.push_back(std::move(job));
  }
  local.batches = batches.size();

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> requests{0};
  std::atomic<std::size_t> retries{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::mutex dim_mu;
  std::optional<std::size_t> embedding_dim;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t b = next.fetch_add(1);
      if (b >= batches.size()) return;
      const Batch& batch = batches[b];
      try {
        auto responses = score_with_retry(endpoint, batch.jobs, options, requests, retries);
        if (responses.size() != batch.jobs.size())
          throw ProtocolError(batch.jobs.front().request.request_id,
                              "endpoint returned " + std::to_string(responses.size()) +
                                  " responses for a batch of " +
                                  std::to_string(batch.jobs.size()));
        std::vector<Prediction> done;
        done.reserve(responses.size());
        for (std::size_t k = 0; k < responses.size(); ++k) {
          const ScoreJob& job = batch.jobs[k];
          ScoreResponse& resp = responses[k];
          validate_response(job.request, resp);
          if (job.request.forced_passages && resp.forced_passages_applied != true)
            throw ProtocolError(job.request.request_id,
                                "endpoint ignored forced passages (no forced_passages_applied "
                                "echo); it cannot be used for interventions");
          if (resp.query_embedding) {
            std::lock_guard lock(dim_mu);
            if (!embedding_dim) embedding_dim = resp.query_embedding->size();
            if (*embedding_dim != resp.query_embedding->size())
              throw ProtocolError(job.request.request_id,
                                  "query embedding dimension changed within the run");
          }
          Prediction p;
          p.key = {job.context->relation_id, job.context->subject, job.context->template_index};
          p.chosen = select_constrained(resp, job.request.candidates);
          p.scores = std::move(resp.scores);
          p.passages = std::move(resp.passages);
          if (job.request.forced_passages && !p.passages) p.passages = job.request.forced_passages;
          p.query_embedding = std::move(resp.query_embedding);
          p.free_generation = std::move(resp.free_generation);
          done.push_back(std::move(p));
        }
        cache.append(done);
        for (std::size_t k = 0; k < done.size(); ++k)
          results[batch.query_indices[k]] = std::move(done[k]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const std::size_t n_threads = std::min(
      {std::max<std::size_t>(1, options.concurrency),
       std::max<std::size_t>(1, endpoint.max_concurrency()), std::max<std::size_t>(1, batches.size())});
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  local.requests = requests.load();
  local.retries = retries.load();
  if (stats) *stats = local;
  if (first_error) std::rethrow_exception(first_error);

  std::vector<Prediction> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  cache.finalize(out);
  return out;
}

}  // namespace paracons
