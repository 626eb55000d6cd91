#include <random>

#include "doctest.h"
#include "paracons/corpus.hpp"
#include "paracons/error.hpp"
#include "support/fixtures.hpp"

using namespace paracons;
using paracons::testing::benchmark_duplicate_counts;
using paracons::testing::duplicate_fixture;

namespace {

const RelationCuration& find(const CurationReport& r, const std::string& id) {
  for (const auto& c : r.relations) {
    if (c.relation_id == id) return c;
  }
  throw std::runtime_error("no relation " + id);
}

}  // namespace

TEST_SUITE("curation") {
  TEST_CASE("fixture reproduces the published duplicate statistics") {
    const auto ds = duplicate_fixture(benchmark_duplicate_counts());
    const auto result = deduplicate(ds);
    std::size_t entries = 0, dups = 0, exact = 0;
    for (const auto& expect : benchmark_duplicate_counts()) {
      const auto& c = find(result.report, expect.relation_id);
      CAPTURE(expect.relation_id);
      CHECK(c.entries == expect.entries);
      CHECK(c.duplicates == expect.duplicates);
      CHECK(c.exact_duplicates == expect.exact);
      entries += c.entries;
      dups += c.duplicates;
      exact += c.exact_duplicates;
    }
    CHECK(entries == 23097);
    CHECK(dups == 647);
    CHECK(exact == 15);
  }

  TEST_CASE("default threshold keeps 30 relations and 21830 tuples") {
    const auto result = deduplicate(duplicate_fixture(benchmark_duplicate_counts()));
    CHECK(result.report.retained_relations() == 30);
    CHECK(result.report.total_retained() == 21830);
    CHECK(result.curated.relations.size() == 30);
    CHECK(result.curated.tuple_count() == 21830);
    CHECK(find(result.report, "P37").dropped);
    CHECK(result.curated.find("P37") == nullptr);
  }

  TEST_CASE("threshold 0.05 drops the relations above five percent") {
    const auto result = deduplicate(duplicate_fixture(benchmark_duplicate_counts()), 0.05);
    std::vector<std::string> dropped;
    for (const auto& c : result.report.relations) {
      if (c.dropped) dropped.push_back(c.relation_id);
    }
    // Rates: P37 .311, P276 .097, P101 .091, P361 .086; P138 .0499 stays.
    CHECK(dropped == std::vector<std::string>{"P101", "P276", "P361", "P37"});
    CHECK_FALSE(find(result.report, "P138").dropped);
  }

  TEST_CASE("every instance of a repeated key is removed") {
    Dataset ds;
    auto rel = paracons::testing::synthetic_relation({"R1", 0, 2, 4});
    rel.tuples = {{"a", "R1", "Cand0", false}, {"b", "R1", "Cand1", false},
                  {"a", "R1", "Cand2", false}, {"c", "R1", "Cand3", false},
                  {"c", "R1", "Cand3", false}, {"d", "R1", "Cand0", false},
                  {"e", "R1", "Cand0", false}, {"f", "R1", "Cand0", false},
                  {"g", "R1", "Cand0", false}, {"h", "R1", "Cand0", false},
                  {"i", "R1", "Cand0", false}, {"j", "R1", "Cand0", false},
                  {"k", "R1", "Cand0", false}, {"l", "R1", "Cand0", false},
                  {"m", "R1", "Cand0", false}, {"n", "R1", "Cand0", false},
                  {"o", "R1", "Cand0", false}, {"p", "R1", "Cand0", false},
                  {"q", "R1", "Cand0", false}, {"r", "R1", "Cand0", false}};
    ds.relations.push_back(rel);
    const auto result = deduplicate(ds);
    const auto& c = result.report.relations.at(0);
    CHECK(c.entries == 20);
    CHECK(c.duplicates == 4);
    CHECK(c.exact_duplicates == 1);
    CHECK(c.removed == 4);
    CHECK(c.retained == 16);
    CHECK_FALSE(c.dropped);  // exactly 0.20 is not above the threshold
    for (const auto& t : result.curated.relations.at(0).tuples) {
      CHECK(t.subject != "a");
      CHECK(t.subject != "c");
    }
  }

  TEST_CASE("threshold must lie strictly inside (0, 1)") {
    const auto ds = paracons::testing::synthetic_dataset(1, 3, 2, 2);
    CHECK_THROWS_AS(deduplicate(ds, 0.0), ValidationError);
    CHECK_THROWS_AS(deduplicate(ds, 1.0), ValidationError);
    CHECK_THROWS_AS(deduplicate(ds, -0.5), ValidationError);
    CHECK_NOTHROW(deduplicate(ds, 0.5));
  }

  TEST_CASE("deduplicate is idempotent on randomized fixtures") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<paracons::testing::DuplicateCounts> counts;
      std::vector<std::string> ids;
      const int n_rel = 1 + static_cast<int>(gen() % 5);
      for (int r = 0; r < n_rel; ++r) ids.push_back("T" + std::to_string(r));
      for (const auto& id : ids) {
        const std::size_t entries = 5 + gen() % 60;
        std::size_t dups = gen() % (entries / 2 + 1);
        if (dups == 1) dups = 0;
        const std::size_t exact = dups >= 2 ? gen() % (dups / 2 + 1) : 0;
        // Keep the construction feasible: exact pairs plus a pair/triple remainder.
        std::size_t left = dups - 2 * exact;
        if (left == 1) left = 0, dups = 2 * exact;
        counts.push_back({id.c_str(), entries, dups, exact});
      }
      const auto ds = duplicate_fixture(counts);
      const double thr = 0.05 + 0.9 * static_cast<double>(gen() % 1000) / 1000.0;
      const auto once = deduplicate(ds, thr);
      const auto twice = deduplicate(once.curated, thr);
      CAPTURE(trial);
      CHECK(twice.curated == once.curated);
      for (const auto& c : twice.report.relations) {
        CHECK(c.duplicates == 0);
        CHECK_FALSE(c.dropped);
      }
    }
  }
}
