#include <map>
#include <set>

#include "doctest.h"
#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"
#include "paracons/scoring.hpp"

using namespace paracons;

namespace {

const std::vector<std::string> kCands{"Africa", "Asia", "Europe", "Oceania"};

ScoreJob job_for(const std::string& subject, std::size_t tpl, const std::string& gold = "Asia",
                 int n_passages = 20) {
  ScoreJob j;
  j.request.request_id = "R:" + subject + ":" + std::to_string(tpl);
  j.request.prompt = subject + " template " + std::to_string(tpl) + " [MASK]";
  j.request.candidates = kCands;
  j.request.n_passages = n_passages;
  j.context = QueryContext{"R", subject, tpl, gold};
  return j;
}

std::string chosen(const ScoreResponse& r) {
  return select_constrained(r, kCands);
}

}  // namespace

TEST_SUITE("mock_scorer") {
  TEST_CASE("spec parsing") {
    CHECK(parse_mock_spec("oracle").kind == MockKind::kOracle);
    CHECK(parse_mock_spec("hash").kind == MockKind::kHash);
    const auto p = parse_mock_spec("parametric:0.9?reuse=1&hub=1&dim=4&free=1");
    CHECK(p.kind == MockKind::kParametric);
    CHECK(p.q == doctest::Approx(0.9));
    CHECK(p.reuse == doctest::Approx(1.0));
    CHECK(p.hub);
    CHECK(p.embedding_dim == 4);
    CHECK(p.free_generation);
    CHECK(parse_mock_spec("fixed:London").fixed_answer == "London");
    CHECK(parse_mock_spec("reader?ignore_forced=1").ignore_forced);
    CHECK(parse_mock_spec(p.canonical()).canonical() == p.canonical());

    CHECK_THROWS_AS(parse_mock_spec("nope"), ValidationError);
    CHECK_THROWS_AS(parse_mock_spec("parametric"), ValidationError);
    CHECK_THROWS_AS(parse_mock_spec("parametric:1.5"), ValidationError);
    CHECK_THROWS_AS(parse_mock_spec("fixed:"), ValidationError);
    CHECK_THROWS_AS(parse_mock_spec("oracle:3"), ValidationError);
    CHECK_THROWS_AS(parse_mock_spec("oracle?color=red"), ValidationError);
    CHECK_THROWS_AS(parse_mock_spec("oracle?reuse=2"), ValidationError);
  }

  TEST_CASE("identity distinguishes configurations") {
    MockScorer a(parse_mock_spec("oracle"), 1);
    MockScorer b(parse_mock_spec("oracle?reuse=1"), 1);
    CHECK(a.identity() != b.identity());
    CHECK(a.identity().rfind("mock:oracle", 0) == 0);
  }

  TEST_CASE("oracle always picks the gold") {
    MockScorer m(parse_mock_spec("oracle"), 5);
    for (std::size_t t = 0; t < 4; ++t) {
      for (const auto& gold : kCands) {
        const auto r = m.score_one(job_for("S" + gold, t, gold));
        CHECK(chosen(r) == gold);
      }
    }
  }

  TEST_CASE("oracle without query context reports an error") {
    MockScorer m(parse_mock_spec("oracle"), 5);
    auto j = job_for("S", 0);
    j.context.reset();
    const auto r = m.score_one(j);
    REQUIRE(r.error.has_value());
    CHECK_THROWS_AS(validate_response(j.request, r), ProtocolError);
  }

  TEST_CASE("hash scores are a deterministic function of prompt and candidate") {
    MockScorer a(parse_mock_spec("hash"), 9), b(parse_mock_spec("hash"), 9),
        c(parse_mock_spec("hash"), 10);
    const auto j = job_for("S", 1);
    CHECK(a.score_one(j).scores == b.score_one(j).scores);
    CHECK(a.score_one(j).scores != c.score_one(j).scores);
    for (double s : a.score_one(j).scores) CHECK(s < 0.0);
  }

  TEST_CASE("parametric extremes") {
    MockScorer always(parse_mock_spec("parametric:1"), 3), never(parse_mock_spec("parametric:0"), 3);
    for (int i = 0; i < 50; ++i) {
      const auto j = job_for("S" + std::to_string(i), 0, "Europe");
      CHECK(chosen(always.score_one(j)) == "Europe");
      CHECK(chosen(never.score_one(j)) != "Europe");
    }
  }

  TEST_CASE("fixed answer, with fallback when it is not a candidate") {
    MockScorer m(parse_mock_spec("fixed:Europe"), 0), absent(parse_mock_spec("fixed:Mars"), 0);
    CHECK(chosen(m.score_one(job_for("S", 0))) == "Europe");
    CHECK(chosen(absent.score_one(job_for("S", 0))) == "Africa");
  }

  TEST_CASE("synthesized retrieval") {
    MockScorer keyed(parse_mock_spec("oracle?reuse=1"), 4);
    const auto a = keyed.score_one(job_for("S", 0));
    const auto b = keyed.score_one(job_for("S", 3));
    REQUIRE(a.passages);
    CHECK(a.passages->size() == 20);
    CHECK(*a.passages == *b.passages);  // retrieval keyed on the subject only

    MockScorer fresh(parse_mock_spec("oracle?reuse=0"), 4);
    const auto c = fresh.score_one(job_for("S", 0));
    const auto d = fresh.score_one(job_for("S", 1));
    std::set<std::string> ids_c;
    for (const auto& p : *c.passages) ids_c.insert(p.passage_id);
    for (const auto& p : *d.passages) CHECK(ids_c.count(p.passage_id) == 0);

    MockScorer hub(parse_mock_spec("oracle?hub=1&reuse=0"), 4);
    const auto h1 = hub.score_one(job_for("S", 0));
    const auto h2 = hub.score_one(job_for("T", 2));
    CHECK((*h1.passages)[0].passage_id == "R/hub");
    CHECK((*h1.passages)[0] == (*h2.passages)[0]);
  }

  TEST_CASE("passage ids determine titles across queries") {
    MockScorer m(parse_mock_spec("oracle?reuse=0.5"), 11);
    std::map<std::string, std::string> title_of;
    for (const auto* s : {"S", "T"}) {
      for (std::size_t t = 0; t < 5; ++t) {
        const auto resp = m.score_one(job_for(s, t));
        for (const auto& p : *resp.passages) {
          auto it = title_of.emplace(p.passage_id, p.title).first;
          CHECK(it->second == p.title);
        }
      }
    }
  }

  TEST_CASE("embeddings") {
    MockScorer m(parse_mock_spec("oracle?dim=6&reuse=1"), 2);
    const auto a = m.score_one(job_for("S", 0));
    const auto b = m.score_one(job_for("S", 1));
    REQUIRE(a.query_embedding);
    CHECK(a.query_embedding->size() == 6);
    CHECK(*a.query_embedding == *b.query_embedding);  // no template noise at reuse 1
    MockScorer none(parse_mock_spec("oracle?dim=0"), 2);
    CHECK_FALSE(none.score_one(job_for("S", 0)).query_embedding.has_value());
    auto no_retrieval = job_for("S", 0);
    no_retrieval.request.want_retrieval = false;
    const auto r = m.score_one(no_retrieval);
    CHECK_FALSE(r.passages.has_value());
    CHECK_FALSE(r.query_embedding.has_value());
  }

  TEST_CASE("forced passages are used and acknowledged") {
    const std::vector<Passage> forced{{"x1", "Doc", "Europe Europe Asia"},
                                      {"x2", "Doc", "Oceania"}};
    MockScorer reader(parse_mock_spec("reader"), 0);
    auto j = job_for("S", 2);
    j.request.forced_passages = forced;
    const auto r = reader.score_one(j);
    CHECK(r.forced_passages_applied == std::optional<bool>(true));
    CHECK(r.passages == std::optional<std::vector<Passage>>(forced));
    CHECK(chosen(r) == "Europe");
    CHECK(r.scores == std::vector<double>{0, 1, 2, 1});

    MockScorer deaf(parse_mock_spec("reader?ignore_forced=1"), 0);
    const auto d = deaf.score_one(j);
    CHECK(d.forced_passages_applied == std::optional<bool>(false));
    CHECK(*d.passages != forced);
  }

  TEST_CASE("reader without passages picks the first candidate") {
    MockScorer reader(parse_mock_spec("reader"), 0);
    auto j = job_for("S", 0);
    j.request.want_retrieval = false;
    CHECK(chosen(reader.score_one(j)) == "Africa");
  }

  TEST_CASE("free generation echoes the argmax") {
    MockScorer m(parse_mock_spec("parametric:0.5?free=1"), 8);
    for (int i = 0; i < 20; ++i) {
      const auto r = m.score_one(job_for("S" + std::to_string(i), 0));
      REQUIRE(r.free_generation);
      CHECK(*r.free_generation == chosen(r));
    }
  }
}
