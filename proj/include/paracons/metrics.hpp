#pragma once

// Consistency statistics over a completed prediction set: pairwise
// agreement, accuracy on the canonical template, knowledge partitions,
// stratification by data-issue flags, macro summaries, and correlation.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paracons/corpus.hpp"
#include "paracons/scoring.hpp"

namespace paracons {

// Predictions of one relation arranged as grid[tuple][template].
struct RelationEval {
  const RelationData* data = nullptr;
  std::vector<std::vector<std::optional<Prediction>>> grid;

  const RelationSpec& spec() const { return data->spec; }
  const std::optional<Prediction>& at(std::size_t tuple, std::size_t tpl) const {
    return grid[tuple][tpl];
  }
  bool correct(std::size_t tuple, std::size_t tpl) const;
};

struct EvalSet {
  std::vector<RelationEval> relations;
  std::size_t unmatched_predictions = 0;  // keys absent from the dataset
};

/// Arranges predictions by (relation, tuple, template). `dataset` must
/// outlive the result.
EvalSet build_eval_set(const Dataset& dataset, std::span<const Prediction> predictions);

// ---------------------------------------------------------------------------

struct PairRecord {
  std::size_t tuple = 0;
  std::size_t i = 0;  // template indices, i < j
  std::size_t j = 0;
  bool agree = false;
  bool correct_i = false;
  bool correct_j = false;
  // Filled by the retrieval analysis when passages are available.
  std::optional<double> id_overlap;
  std::optional<double> title_overlap;
  std::optional<double> embedding_similarity;
  std::optional<double> pred_rank_mean;
  std::optional<double> gold_rank_mean;
};

struct Diagnostics {
  std::size_t excluded_tuples = 0;  // fewer than two predictions
  std::size_t missing_lama = 0;     // no prediction for the canonical template
  std::size_t incomplete_tuples = 0;
};

/// C(n, 2) records per tuple over the templates that have predictions.
/// Tuples with fewer than two predictions are skipped and counted.
std::vector<PairRecord> pair_records(const RelationEval& rel, Diagnostics* diag = nullptr);

/// Agreeing pairs over all pairs, pooled across tuples; nullopt when empty.
std::optional<double> relation_consistency(std::span<const PairRecord> pairs);

/// Fraction of tuples whose canonical-template prediction equals the gold.
std::optional<double> accuracy_lama(const RelationEval& rel, Diagnostics* diag = nullptr);

/// Fraction of tuples whose every template prediction equals the gold, over
/// the tuples accuracy_lama considers. Missing predictions are skipped.
std::optional<double> consistent_and_accurate(const RelationEval& rel,
                                              Diagnostics* diag = nullptr);

struct KnowledgePartition {
  std::vector<std::size_t> knowledgeable;  // >= 1 correct prediction
  std::vector<std::size_t> unknowledgeable;
  std::optional<double> know_cons;
  std::optional<double> k_know_cons;  // both agree and both correct
  std::optional<double> unk_cons;
};

KnowledgePartition knowledge_partition(const RelationEval& rel,
                                       std::span<const PairRecord> pairs);

struct RelationMetrics {
  std::string relation_id;
  std::optional<double> consistency;
  std::optional<double> accuracy;
  std::optional<double> consistent_and_accurate;
  std::optional<double> know_cons;
  std::optional<double> k_know_cons;
  std::optional<double> unk_cons;
  std::size_t tuples = 0;
  std::size_t pairs = 0;
  std::size_t knowledgeable = 0;
  std::size_t unknowledgeable = 0;
  Diagnostics diagnostics;
};

RelationMetrics compute_relation_metrics(const RelationEval& rel,
                                         std::span<const PairRecord> pairs);

// ---------------------------------------------------------------------------

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t n = 0;
};

/// nullopt for an empty input.
std::optional<MeanStd> mean_std(std::span<const double> values);
std::optional<MeanStd> mean_std(std::span<const std::optional<double>> values);

struct SummaryMetrics {
  std::size_t relations = 0;
  std::optional<MeanStd> consistency;
  std::optional<MeanStd> accuracy;
  std::optional<MeanStd> consistent_and_accurate;
  std::optional<MeanStd> know_cons;
  std::optional<MeanStd> k_know_cons;
  std::optional<MeanStd> unk_cons;
};

/// Unweighted mean and population std across relations, per metric; absent
/// per-relation values are skipped.
SummaryMetrics macro_summary(std::span<const RelationMetrics> per_relation);

/// Pearson product-moment correlation. nullopt when fewer than two points or
/// either series is constant. Throws std::invalid_argument on a size mismatch.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Stratification by data-issue flags.

/// A relation is in scope for the subject-object split when flagged, or when
/// at least this fraction of its tuples show subject-object overlap.
inline constexpr double kSubjObjScopeRate = 0.20;

struct Stratum {
  std::string name;
  std::optional<MeanStd> consistency;  // macro over relations with pairs here
  std::size_t relations = 0;
  std::size_t pairs = 0;
};

struct StratifiedTable {
  std::string issue;    // subj_obj_similarity, unidiomatic_object, ...
  std::string caption;
  std::size_t scope_relations = 0;
  std::vector<Stratum> strata;
};

/// The four issue tables: subject-object similarity and unidiomatic objects
/// (affected vs. not, by tuple), unidiomatic templates (both / one / none, by
/// template pair), and semantic overlap (flagged vs. unflagged relations).
/// Tuple- and pair-level splits are restricted to relations flagged for the
/// issue; when no relation is flagged they range over all relations.
std::vector<StratifiedTable> stratified_consistency(
    const EvalSet& eval, std::span<const std::vector<PairRecord>> pairs);

}  // namespace paracons
