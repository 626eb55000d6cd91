#pragma once

// Retriever-consistency analysis: passage overlap and query-embedding
// similarity per paraphrase pair, random baselines, retrieval interventions,
// and frequency ranks of predictions within the retrieved passages.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paracons/corpus.hpp"
#include "paracons/metrics.hpp"
#include "paracons/protocol.hpp"
#include "paracons/scoring.hpp"

namespace paracons {

// ---------------------------------------------------------------------------
// Pair metrics.

struct RetrieverPairMetrics {
  std::optional<double> id_overlap;
  std::optional<double> title_overlap;
  std::optional<double> embedding_similarity;
  bool count_mismatch = false;  // passage lists of different lengths
};

/// Size of the multiset intersection over the larger list size; nullopt when
/// both lists are empty.
std::optional<double> multiset_overlap(std::span<const std::string> a,
                                       std::span<const std::string> b);

/// Overlaps need passages on both sides and similarity needs embeddings on
/// both sides; missing inputs leave the field empty.
RetrieverPairMetrics retriever_pair_metrics(const Prediction& a, const Prediction& b);

// ---------------------------------------------------------------------------
// Frequency ranks.

/// Case-insensitive, whole-token, non-overlapping occurrences of `phrase`
/// (matched as a contiguous token sequence) in `text`.
std::size_t count_occurrences(std::string_view text, std::string_view phrase);

/// Occurrences of each candidate summed over passage texts. Matches never
/// span passage boundaries.
std::vector<std::size_t> candidate_frequencies(std::span<const Passage> passages,
                                               std::span<const std::string> candidates);

/// Rank of `index` when candidates are sorted by frequency, descending, with
/// tied candidates sharing the mean of the positions they span; normalized
/// to (rank - 1) / (n - 1). A single candidate ranks 0.
double normalized_rank(std::span<const std::size_t> frequencies, std::size_t index);

struct RankRecord {
  QueryKey key;
  double pred_rank = 0.0;
  double gold_rank = 0.0;
  std::vector<std::pair<std::string, std::size_t>> candidate_frequencies;
};

/// nullopt when the prediction carries no passages or either answer is not
/// a candidate.
std::optional<RankRecord> frequency_rank(const Prediction& prediction,
                                         std::span<const std::string> candidates,
                                         std::string_view gold);

/// Fills the retrieval annotations of every pair of `pairs` (indexed like
/// eval.relations) from the predictions' passages and embeddings.
struct AnnotationStats {
  std::size_t count_mismatches = 0;
  std::size_t pairs_with_passages = 0;
  std::size_t pairs_with_embeddings = 0;
};
AnnotationStats annotate_pairs(const EvalSet& eval, std::vector<std::vector<PairRecord>>& pairs);

bool has_retrieval(const EvalSet& eval);

// ---------------------------------------------------------------------------
// Random baselines.

enum class BaselineMode { kAll, kSubject };
std::string_view baseline_name(BaselineMode mode);  // "r-all", "r-subject"

struct BaselineSample {
  std::size_t relation = 0;  // index into eval.relations of the first query
  RetrieverPairMetrics metrics;
};

struct BaselineResult {
  BaselineMode mode = BaselineMode::kAll;
  std::vector<BaselineSample> samples;
  std::vector<std::string> skipped_relations;
};

inline constexpr std::size_t kDefaultBaselineSamples = 1000;

/// For each relation, `n_samples` pairs of predictions carrying retrieval.
/// The first query is drawn from the relation; under kAll the second is any
/// query of a different tuple anywhere in the set, under kSubject a query of
/// a different subject of the same relation. Relations with fewer than two
/// usable subjects (kSubject) or no usable partner are skipped.
BaselineResult random_baseline(const EvalSet& eval, BaselineMode mode,
                               std::size_t n_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Interventions.

enum class InterventionMode { kRelevant, kIrrCohesive, kIrrIncohesive };
std::string_view intervention_name(InterventionMode mode);  // relevant, irr_cohesive, ...
InterventionMode parse_intervention_mode(std::string_view name);

struct PlanEntry {
  std::string relation_id;
  std::string subject;
  std::string donor_subject;  // empty for irr_incohesive
  std::vector<Passage> passages;
};

struct InterventionPlan {
  InterventionMode mode = InterventionMode::kRelevant;
  std::uint64_t seed = 0;
  int n_passages = kDefaultPassages;
  std::vector<PlanEntry> entries;  // one per tuple, in dataset order
  std::vector<std::string> diagnostics;

  const PlanEntry* find(std::string_view relation_id, std::string_view subject) const;
  /// SHA-256 of the serialized plan; used as the cache variant.
  std::string digest() const;
};

/// Every paraphrase of a tuple receives one passage list. relevant: the
/// tuple's own canonical-template retrieval. irr_cohesive: the canonical-
/// template retrieval of a seeded other subject of the same relation.
/// irr_incohesive: `n_passages` passages drawn without replacement from the
/// pool of all distinct retrieved passages. Throws ValidationError when a
/// needed baseline prediction has no passages.
InterventionPlan plan_intervention(const EvalSet& baseline, InterventionMode mode,
                                   std::uint64_t seed, int n_passages = kDefaultPassages);

std::string serialize_plan(const InterventionPlan& plan);
InterventionPlan parse_plan(std::string_view text);

/// Scores every query of `dataset` with the plan's passages forced.
std::vector<Prediction> run_intervention(const Dataset& dataset, const InterventionPlan& plan,
                                         Endpoint& endpoint,
                                         const std::filesystem::path& cache_path,
                                         RunOptions options, RunStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Reports.

struct MetricDistribution {
  std::optional<MeanStd> mu;     // distribution over relations of per-relation means
  std::optional<MeanStd> sigma;  // ... of per-relation stds
};

struct RetrieverRow {
  std::string source;  // "r-all", "r-subject", or the model label
  MetricDistribution id, title, embedding;
};

struct MatchRow {
  std::string metric;  // id, title, embedding
  std::optional<MeanStd> match;
  std::optional<MeanStd> no_match;
};

struct CorrelationMatrix {
  // cells[a][b] over metrics {id, title, embedding}: mean and std across
  // relations of the per-relation Pearson coefficient.
  std::optional<MeanStd> cells[3][3];
};

struct ReaderCorrelation {
  std::optional<MeanStd> id, title, embedding;
};

struct RetrieverReport {
  std::vector<RetrieverRow> rows;           // baselines first, then the model
  std::vector<MatchRow> match;              // stratified by reader agreement
  std::optional<CorrelationMatrix> correlations;  // on r-all samples
  ReaderCorrelation reader_correlation;     // agree flag vs each metric
};

RetrieverReport retriever_consistency_report(
    const EvalSet& eval, std::span<const std::vector<PairRecord>> annotated,
    std::span<const BaselineResult> baselines, std::string model_label);

struct RankRow {
  std::string type;  // pred, gold
  std::optional<MeanStd> rank, match, no_match;
};

struct RankReport {
  std::vector<RankRow> rows;
  std::optional<MeanStd> pearson_pred;  // agree flag vs pred_rank_mean
  std::optional<MeanStd> pearson_gold;  // agree flag vs gold_rank_mean
};

RankReport rank_consistency_report(std::span<const std::vector<PairRecord>> annotated);

}  // namespace paracons
