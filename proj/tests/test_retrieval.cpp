#include <algorithm>

#include "doctest.h"
#include "paracons/retrieval.hpp"
#include "support/fixtures.hpp"

using namespace paracons;
using paracons::testing::run_mock;
using paracons::testing::synthetic_dataset;
using paracons::testing::TempDir;

namespace {

Prediction with_passages(std::vector<Passage> passages) {
  Prediction p;
  p.key = {"R", "s", 0};
  p.chosen = "x";
  p.scores = {0.0};
  p.passages = std::move(passages);
  return p;
}

struct Annotated {
  Dataset ds;
  std::vector<Prediction> preds;
  EvalSet eval;
  std::vector<std::vector<PairRecord>> pairs;
  AnnotationStats stats;
};

void annotate(Annotated& a, const std::string& spec, const std::filesystem::path& cache) {
  a.preds = run_mock(a.ds, spec, 11, cache);
  a.eval = build_eval_set(a.ds, a.preds);
  for (const auto& rel : a.eval.relations) a.pairs.push_back(pair_records(rel));
  a.stats = annotate_pairs(a.eval, a.pairs);
}

}  // namespace

TEST_SUITE("retrieval") {
  TEST_CASE("identical passage lists overlap completely") {
    std::vector<Passage> ps;
    for (int k = 0; k < 20; ++k) ps.push_back({"id" + std::to_string(k), "t" + std::to_string(k), "x"});
    auto a = with_passages(ps);
    a.query_embedding = std::vector<double>{0.3, -1.0, 2.0};
    auto b = a;
    const auto m = retriever_pair_metrics(a, b);
    CHECK(*m.id_overlap == 1.0);
    CHECK(*m.title_overlap == 1.0);
    CHECK(*m.embedding_similarity == doctest::Approx(1.0));
    CHECK_FALSE(m.count_mismatch);
  }

  TEST_CASE("disjoint ids with half the titles shared") {
    std::vector<Passage> pa, pb;
    for (int k = 0; k < 20; ++k) {
      pa.push_back({"a" + std::to_string(k), "title" + std::to_string(k), ""});
      pb.push_back({"b" + std::to_string(k),
                    k < 10 ? "title" + std::to_string(k) : "other" + std::to_string(k), ""});
    }
    const auto m = retriever_pair_metrics(with_passages(pa), with_passages(pb));
    CHECK(*m.id_overlap == 0.0);
    CHECK(*m.title_overlap == 0.5);
    CHECK_FALSE(m.embedding_similarity.has_value());
  }

  TEST_CASE("multiset overlap counts repeats and uses the larger list") {
    const std::vector<std::string> a{"x", "x", "y"}, b{"x", "y", "y", "z"};
    CHECK(*multiset_overlap(a, b) == doctest::Approx(2.0 / 4.0));
    CHECK_FALSE(multiset_overlap({}, {}).has_value());
    const std::vector<std::string> one{"x"};
    CHECK(*multiset_overlap(one, {}) == 0.0);

    auto p = with_passages({{"1", "t", ""}, {"2", "t", ""}});
    auto q = with_passages({{"1", "t", ""}});
    CHECK(retriever_pair_metrics(p, q).count_mismatch);
    CHECK(*retriever_pair_metrics(p, q).title_overlap == 0.5);
  }

  TEST_CASE("occurrence counting") {
    CHECK(count_occurrences("Norway, norway and NORWAY.", "Norway") == 3);
    CHECK(count_occurrences("Norwayan Norways", "Norway") == 0);
    CHECK(count_occurrences("New York, new  york; York", "New York") == 2);
    CHECK(count_occurrences("a a a", "a a") == 1);
    CHECK(count_occurrences("anything", "") == 0);
    const std::vector<Passage> ps{{"1", "t", "Oslo is in Norway"}, {"2", "t", "Norway"}};
    const std::vector<std::string> c{"Norway", "Oslo", "Sweden"};
    CHECK(candidate_frequencies(ps, c) == std::vector<std::size_t>{2, 1, 0});
    // A match may not span two passages.
    const std::vector<Passage> split{{"1", "t", "New"}, {"2", "t", "York"}};
    const std::vector<std::string> ny{"New York"};
    CHECK(candidate_frequencies(split, ny)[0] == 0);
  }

  TEST_CASE("normalized ranks") {
    // Canada 2, Norway 7, Singapore 5.
    const std::vector<std::size_t> f{2, 7, 5};
    CHECK(normalized_rank(f, 2) == 0.5);
    CHECK(normalized_rank(f, 1) == 0.0);
    CHECK(normalized_rank(f, 0) == 1.0);
    const std::vector<std::size_t> tie{4, 4, 1};
    CHECK(normalized_rank(tie, 0) == 0.25);
    CHECK(normalized_rank(tie, 1) == 0.25);
    const std::vector<std::size_t> single{3};
    CHECK(normalized_rank(single, 0) == 0.0);
    const std::vector<std::size_t> zeros{0, 0, 0, 0};
    CHECK(normalized_rank(zeros, 3) == 0.5);
  }

  TEST_CASE("frequency rank of a prediction from its passages") {
    std::vector<Passage> ps{
        {"1", "a", "Canada Norway Norway Singapore"},
        {"2", "b", "Norway Norway Norway Singapore Singapore Canada"},
        {"3", "c", "norway NORWAY Singapore Singapore."},
    };
    auto p = with_passages(ps);
    p.chosen = "Singapore";
    const std::vector<std::string> c{"Canada", "Norway", "Singapore"};
    const auto r = frequency_rank(p, c, "Norway");
    REQUIRE(r);
    CHECK(r->pred_rank == 0.5);
    CHECK(r->gold_rank == 0.0);
    REQUIRE(r->candidate_frequencies.size() == 3);
    CHECK(r->candidate_frequencies[0].second == 2);
    CHECK(r->candidate_frequencies[1].second == 7);
    CHECK(r->candidate_frequencies[2].second == 5);

    auto reordered = p;
    std::reverse(reordered.passages->begin(), reordered.passages->end());
    auto doubled = p;
    doubled.passages->insert(doubled.passages->end(), ps.begin(), ps.end());
    for (const auto& v : {reordered, doubled}) {
      const auto rv = frequency_rank(v, c, "Norway");
      CHECK(rv->pred_rank == r->pred_rank);
      CHECK(rv->gold_rank == r->gold_rank);
    }

    auto bare = p;
    bare.passages.reset();
    CHECK_FALSE(frequency_rank(bare, c, "Norway").has_value());
    CHECK_FALSE(frequency_rank(p, c, "Atlantis").has_value());
  }

  TEST_CASE("subject-keyed retrieval makes paraphrases retrieve identically") {
    TempDir dir;
    Annotated a{synthetic_dataset(2, 5, 3, 4), {}, {}, {}, {}};
    annotate(a, "mock:hash?reuse=1", dir / "c.jsonl");
    CHECK(has_retrieval(a.eval));
    CHECK(a.stats.pairs_with_passages == 2 * 5 * 3);
    for (const auto& rel : a.pairs) {
      for (const auto& p : rel) {
        CHECK(*p.id_overlap == 1.0);
        CHECK(*p.embedding_similarity == doctest::Approx(1.0));
      }
    }
  }

  TEST_CASE("id overlap never exceeds title overlap on mock retrieval") {
    TempDir dir;
    for (const char* spec : {"mock:hash", "mock:parametric:0.7?reuse=0.3", "mock:oracle?hub=1&reuse=0.8"}) {
      Annotated a{synthetic_dataset(2, 6, 4, 4), {}, {}, {}, {}};
      annotate(a, spec, dir / (std::string("c") + spec[5] + ".jsonl"));
      for (const auto& rel : a.pairs) {
        for (const auto& p : rel) CHECK(*p.id_overlap <= *p.title_overlap);
      }
    }
  }

  TEST_CASE("a reader that follows term frequency predicts the top candidate") {
    TempDir dir;
    Annotated a{synthetic_dataset(2, 5, 3, 4), {}, {}, {}, {}};
    annotate(a, "mock:reader?reuse=1", dir / "c.jsonl");
    const auto report = rank_consistency_report(a.pairs);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].type == "pred");
    CHECK(report.rows[1].type == "gold");
    CHECK(report.rows[0].rank->mean == 0.0);
    CHECK(report.rows[1].rank->mean == 0.0);
  }

  TEST_CASE("rank report correlation sign") {
    std::vector<std::vector<PairRecord>> rels(3);
    for (auto& rel : rels) {
      for (int k = 0; k < 6; ++k) {
        PairRecord p;
        p.agree = k % 2 == 0;
        p.pred_rank_mean = p.agree ? 0.0 : 0.4;
        p.gold_rank_mean = 0.2;
        rel.push_back(p);
      }
    }
    const auto r = rank_consistency_report(rels);
    CHECK(r.pearson_pred->mean == doctest::Approx(-1.0));
    CHECK_FALSE(r.pearson_gold.has_value());
    CHECK(r.rows[0].match->mean == 0.0);
    CHECK(r.rows[0].no_match->mean == doctest::Approx(0.4));
    CHECK(r.rows[0].rank->mean == doctest::Approx(0.2));
  }

  TEST_CASE("random baselines") {
    TempDir dir;
    SUBCASE("r-all on unique passages is zero") {
      Annotated a{synthetic_dataset(3, 8, 3, 4), {}, {}, {}, {}};
      annotate(a, "mock:hash", dir / "c.jsonl");
      const auto b = random_baseline(a.eval, BaselineMode::kAll, 200, 5);
      CHECK(b.samples.size() == 3 * 200);
      for (const auto& s : b.samples) CHECK(*s.metrics.id_overlap == 0.0);
    }
    SUBCASE("r-subject sees the shared hub slot") {
      Annotated a{synthetic_dataset(2, 8, 3, 4), {}, {}, {}, {}};
      annotate(a, "mock:hash?hub=1&reuse=0", dir / "c.jsonl");
      const auto b = random_baseline(a.eval, BaselineMode::kSubject, 100, 5);
      for (const auto& s : b.samples) CHECK(*s.metrics.id_overlap == doctest::Approx(0.05));
    }
    SUBCASE("fixed seed, identical samples") {
      Annotated a{synthetic_dataset(2, 8, 3, 4), {}, {}, {}, {}};
      annotate(a, "mock:hash?reuse=0.9", dir / "c.jsonl");
      const auto x = random_baseline(a.eval, BaselineMode::kAll, 50, 9);
      const auto y = random_baseline(a.eval, BaselineMode::kAll, 50, 9);
      REQUIRE(x.samples.size() == y.samples.size());
      for (std::size_t i = 0; i < x.samples.size(); ++i) {
        CHECK(x.samples[i].relation == y.samples[i].relation);
        CHECK(x.samples[i].metrics.embedding_similarity == y.samples[i].metrics.embedding_similarity);
      }
    }
    SUBCASE("r-subject skips single-subject relations") {
      Annotated a{synthetic_dataset(2, 1, 3, 4), {}, {}, {}, {}};
      annotate(a, "mock:hash", dir / "c.jsonl");
      const auto b = random_baseline(a.eval, BaselineMode::kSubject, 10, 1);
      CHECK(b.samples.empty());
      CHECK(b.skipped_relations.size() == 2);
    }
  }

  TEST_CASE("retriever report layout and correlation diagonal") {
    TempDir dir;
    Annotated a{synthetic_dataset(3, 10, 4, 4), {}, {}, {}, {}};
    annotate(a, "mock:hash?hub=1&reuse=0.7", dir / "c.jsonl");
    std::vector<BaselineResult> baselines{random_baseline(a.eval, BaselineMode::kAll, 300, 2),
                                          random_baseline(a.eval, BaselineMode::kSubject, 300, 2)};
    const auto report = retriever_consistency_report(a.eval, a.pairs, baselines, "mock");
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].source == "r-all");
    CHECK(report.rows[1].source == "r-subject");
    CHECK(report.rows[2].source == "mock");
    CHECK(report.rows[2].id.mu->mean > report.rows[1].id.mu->mean);
    REQUIRE(report.match.size() == 3);
    REQUIRE(report.correlations);
    bool any = false;
    for (int m = 0; m < 3; ++m) {
      const auto& cell = report.correlations->cells[m][m];
      if (!cell) continue;
      any = true;
      CHECK(cell->mean == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(cell->std == doctest::Approx(0.0).epsilon(1e-9));
      for (int n = 0; n < 3; ++n) {
        const auto& x = report.correlations->cells[m][n];
        const auto& y = report.correlations->cells[n][m];
        CHECK(x.has_value() == y.has_value());
        if (x && y) CHECK(x->mean == doctest::Approx(y->mean));
      }
    }
    CHECK(any);
  }

  TEST_CASE("a constant metric has zero spread and no correlation") {
    TempDir dir;
    Annotated a{synthetic_dataset(2, 6, 3, 4), {}, {}, {}, {}};
    annotate(a, "mock:hash?reuse=1", dir / "c.jsonl");
    std::vector<BaselineResult> baselines{random_baseline(a.eval, BaselineMode::kAll, 100, 2)};
    const auto report = retriever_consistency_report(a.eval, a.pairs, baselines, "m");
    CHECK(report.rows[1].id.sigma->mean == 0.0);
    CHECK(report.rows[1].id.mu->mean == 1.0);
    // r-all id overlap is identically zero here.
    CHECK_FALSE(report.correlations->cells[0][2].has_value());
  }
}
