#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paracons/corpus.hpp"
#include "paracons/endpoint.hpp"
#include "paracons/protocol.hpp"

namespace paracons {

struct QueryKey {
  std::string relation_id;
  std::string subject;
  std::size_t template_index = 0;

  auto operator<=>(const QueryKey&) const = default;
  bool operator==(const QueryKey&) const = default;
};

struct Prediction {
  QueryKey key;
  std::string chosen;
  std::vector<double> scores;
  std::optional<std::vector<Passage>> passages;
  std::optional<std::vector<double>> query_embedding;
  std::optional<std::string> free_generation;

  bool operator==(const Prediction&) const = default;
};

nlohmann::ordered_json to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);

/// Highest-scoring candidate; ties go to the lowest candidate index.
/// Throws ProtocolError on a length mismatch or a non-finite score.
std::string select_constrained(const ScoreResponse& response,
                               std::span<const std::string> candidates);

struct FreeAgreement {
  std::size_t considered = 0;  // free generation present and a candidate
  std::size_t matched = 0;     // ... and equal to the constrained choice
  std::optional<double> rate() const {
    if (considered == 0) return std::nullopt;
    return static_cast<double>(matched) / static_cast<double>(considered);
  }
};

/// Agreement between free generations and constrained choices, over the
/// predictions whose free generation is one of the relation's candidates.
FreeAgreement check_free_agreement(const Dataset& dataset,
                                   std::span<const Prediction> predictions);

// ---------------------------------------------------------------------------
// Prediction cache: JSONL, a header line then one Prediction per line keyed
// by (relation_id, subject, template_index).

struct CacheHeader {
  int format = 1;
  std::string endpoint;
  std::uint64_t seed = 0;
  int n_passages = kDefaultPassages;
  std::string dataset_digest;
  std::string mask_token{kDefaultMaskToken};
  std::string variant;  // e.g. an intervention plan digest; empty for baseline runs

  /// Digest of the header fields; embedded in every downstream artifact.
  std::string run_digest() const;

  bool operator==(const CacheHeader&) const = default;
};

nlohmann::ordered_json to_json(const CacheHeader& h);
CacheHeader cache_header_from_json(const nlohmann::json& j);

struct CacheContents {
  CacheHeader header;
  std::vector<Prediction> predictions;
};

/// Reads a cache file. A truncated final line (interrupted append) is
/// ignored; any other malformed line throws ValidationError.
CacheContents read_cache(const std::filesystem::path& path);

std::string serialize_cache(const CacheHeader& header,
                            std::span<const Prediction> predictions);

class PredictionCache {
 public:
  /// Opens or creates the cache at `path`. An existing cache written under a
  /// different header throws DigestMismatchError.
  PredictionCache(std::filesystem::path path, CacheHeader header);

  const Prediction* find(const QueryKey& key) const;
  std::size_t size() const { return entries_.size(); }

  /// Appends predictions as they complete; safe to call from several threads.
  void append(std::span<const Prediction> predictions);

  /// Atomically rewrites the file with `ordered` in canonical order.
  void finalize(std::span<const Prediction> ordered);

 private:
  std::filesystem::path path_;
  CacheHeader header_;
  std::map<QueryKey, Prediction> entries_;
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Runner.

struct RunOptions {
  std::uint64_t seed = 0;
  int n_passages = kDefaultPassages;  // 0 disables retrieval requests
  std::string mask_token{kDefaultMaskToken};
  std::size_t batch_size = 32;
  std::size_t concurrency = 4;
  int max_attempts = 3;
  std::chrono::milliseconds backoff{100};  // doubled after each failed attempt
  std::string variant;
  // Intervention hook: passages the scorer must condition on, or nullptr.
  std::function<const std::vector<Passage>*(const Query&)> forced;
};

struct RunStats {
  std::size_t queries = 0;
  std::size_t cache_hits = 0;
  std::size_t requests = 0;  // requests sent to the endpoint, retries included
  std::size_t batches = 0;
  std::size_t retries = 0;
};

std::string request_id_for(const Dataset& dataset, const Query& query);

/// One Prediction per query, in query order. Cached predictions are reused;
/// the rest are scored in batches and appended to the cache.
std::vector<Prediction> run_scorer(const Dataset& dataset, std::span<const Query> queries,
                                   Endpoint& endpoint,
                                   const std::filesystem::path& cache_path,
                                   const RunOptions& options, RunStats* stats = nullptr);

}  // namespace paracons
