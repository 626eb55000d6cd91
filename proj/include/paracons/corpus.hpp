#pragma once

// Evaluation dataset: relations with paraphrase templates, gold fact tuples,
// curation (duplicate removal, N-1 filtering), data-issue flags, and query
// rendering.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace paracons {

inline constexpr std::string_view kSubjectSlot = "[X]";
inline constexpr std::string_view kAnswerSlot = "[Y]";
inline constexpr std::string_view kDefaultMaskToken = "[MASK]";

struct Template {
  std::string pattern;  // exactly one [X] (subject) and one [Y] (answer)
  bool lama_original = false;
  bool unidiomatic = false;

  bool operator==(const Template&) const = default;
};

struct RelationSpec {
  std::string relation_id;
  std::string name;
  std::vector<Template> templates;
  std::vector<std::string> candidates;  // ordered; order drives tie-breaking
  bool semantic_overlap = false;
  std::vector<std::string> unidiomatic_objects;
  bool subject_object_similarity_prone = false;

  std::size_t lama_template() const;
  bool is_candidate(std::string_view answer) const;
  bool is_unidiomatic_object(std::string_view answer) const;
  bool has_template_issue() const;

  bool operator==(const RelationSpec&) const = default;
};

struct FactTuple {
  std::string subject;
  std::string relation_id;
  std::string object_gold;
  bool subj_obj_overlap = false;  // computed on load

  bool operator==(const FactTuple&) const = default;
};

struct RelationData {
  RelationSpec spec;
  std::vector<FactTuple> tuples;

  bool operator==(const RelationData&) const = default;
};

struct Dataset {
  std::vector<RelationData> relations;  // sorted by relation_id

  const RelationData* find(std::string_view relation_id) const;
  std::size_t tuple_count() const;
  std::size_t query_count() const;

  bool operator==(const Dataset&) const = default;
};

struct Query {
  std::size_t relation_index = 0;
  std::size_t tuple_index = 0;
  std::size_t template_index = 0;
  std::string prompt;
};

// ---------------------------------------------------------------------------
// Loading and serialization. One JSON-lines file per relation: a header
// record followed by {subject, object} records.

/// Parses one relation file. `source` names the file in error messages.
/// Throws ValidationError naming the offending line.
RelationData parse_relation(std::string_view text, const std::string& source);

/// Checks every type invariant; throws ValidationError prefixed by `source`.
void validate_relation(const RelationData& relation, const std::string& source);

/// Loads every *.jsonl file of `dir`. Throws ValidationError on an empty or
/// missing directory and on any malformed file.
Dataset load_dataset(const std::filesystem::path& dir);

/// Canonical file contents for `relation` (what load_dataset reads back).
std::string serialize_relation(const RelationData& relation);

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// SHA-256 over the canonical serialization of every relation.
std::string dataset_digest(const Dataset& dataset);

// ---------------------------------------------------------------------------
// Curation.

inline constexpr double kDefaultDropThreshold = 0.20;

struct RelationCuration {
  std::string relation_id;
  std::string name;
  std::size_t entries = 0;
  std::size_t duplicates = 0;        // instances whose (subject, relation) repeats
  std::size_t exact_duplicates = 0;  // repeats of an identical (s, r, o)
  std::size_t retained = 0;
  std::size_t removed = 0;
  bool dropped = false;
  double subj_obj_overlap_rate = 0.0;  // over retained tuples

  double duplicate_rate() const {
    return entries == 0 ? 0.0 : static_cast<double>(duplicates) / entries;
  }
};

struct CurationReport {
  double drop_threshold = kDefaultDropThreshold;
  std::vector<RelationCuration> relations;

  std::size_t total_entries() const;
  std::size_t total_retained() const;
  std::size_t retained_relations() const;
};

struct CurationResult {
  Dataset curated;
  CurationReport report;
};

/// Removes every instance of each (subject, relation) key that occurs more
/// than once, then removes whole relations whose duplicate fraction exceeds
/// `drop_threshold`. Throws ValidationError unless 0 < drop_threshold < 1.
CurationResult deduplicate(const Dataset& dataset,
                           double drop_threshold = kDefaultDropThreshold);

// ---------------------------------------------------------------------------
// Flags.

/// Lowercased word tokens; any byte that is not ASCII alphanumeric (and not
/// part of a multibyte UTF-8 sequence) separates tokens.
std::vector<std::string> word_tokens(std::string_view text);

/// Deterministic suffix-stripping stem of one lowercased token.
std::string stem(std::string_view token);

/// True iff some stemmed object token equals some stemmed subject token.
bool compute_subject_object_overlap(std::string_view subject,
                                    std::string_view object);
bool compute_subject_object_overlap(const FactTuple& tuple);

/// Merges the manually annotated data-issue flags for well-known relation
/// ids (semantic overlap, unidiomatic templates and objects, subject-object
/// similarity) into `relation`. Returns true when the id was known.
bool apply_known_flags(RelationSpec& relation);

// ---------------------------------------------------------------------------
// Rendering.

/// Substitutes `subject` for [X] and `mask_token` for [Y]. Substitution is
/// positional on the pattern, so placeholder-like text inside the subject is
/// kept verbatim.
std::string render_prompt(std::string_view pattern, std::string_view subject,
                          std::string_view mask_token = kDefaultMaskToken);

/// |tuples| x |templates| queries in tuple-major order.
std::vector<Query> render_queries(const RelationData& relation,
                                  std::size_t relation_index,
                                  std::string_view mask_token = kDefaultMaskToken);

std::vector<Query> render_all(const Dataset& dataset,
                              std::string_view mask_token = kDefaultMaskToken);

}  // namespace paracons
