#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "paracons/corpus.hpp"
#include "paracons/scoring.hpp"

namespace paracons::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct SyntheticSpec {
  std::string relation_id = "R1";
  std::size_t tuples = 10;
  std::size_t templates = 4;
  std::size_t candidates = 5;
};

/// Templates "[X] tN [Y]." (template 0 is the canonical one), candidates
/// "Cand0".."CandK-1", subjects "<rel>-subj-<i>", gold cycling over candidates.
RelationData synthetic_relation(const SyntheticSpec& spec);
Dataset synthetic_dataset(std::size_t relations, std::size_t tuples, std::size_t templates,
                          std::size_t candidates);

struct DuplicateCounts {
  const char* relation_id;
  std::size_t entries;
  std::size_t duplicates;
  std::size_t exact;
};

/// Per-relation duplicate statistics of the original benchmark release.
const std::vector<DuplicateCounts>& benchmark_duplicate_counts();

/// Dataset whose per-relation entry, duplicate and exact-duplicate counts
/// equal `counts`. Exact duplicates are pairs with equal objects; the other
/// duplicates are pairs (plus one triple when odd) with distinct objects.
Dataset duplicate_fixture(const std::vector<DuplicateCounts>& counts);

/// Runs a mock endpoint over every query of `dataset`, caching under `dir`.
std::vector<Prediction> run_mock(const Dataset& dataset, const std::string& spec,
                                 std::uint64_t seed, const std::filesystem::path& cache,
                                 int n_passages = kDefaultPassages);

/// Predictions with chosen answers taken from answers[relation][tuple][template].
std::vector<Prediction> predictions_from_answers(
    const Dataset& dataset, const std::vector<std::vector<std::vector<std::string>>>& answers);

}  // namespace paracons::testing
