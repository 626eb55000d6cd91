#include "support/fixtures.hpp"

#include <algorithm>
#include <random>

#include "paracons/endpoint.hpp"

namespace paracons::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::mt19937_64 gen{std::random_device{}()};
  for (;;) {
    path_ = fs::temp_directory_path() / ("paracons-test-" + std::to_string(gen()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

RelationData synthetic_relation(const SyntheticSpec& spec) {
  RelationData rd;
  rd.spec.relation_id = spec.relation_id;
  rd.spec.name = "synthetic " + spec.relation_id;
  for (std::size_t t = 0; t < spec.templates; ++t) {
    rd.spec.templates.push_back({"[X] t" + std::to_string(t) + " [Y].", t == 0, false});
  }
  for (std::size_t c = 0; c < spec.candidates; ++c) {
    rd.spec.candidates.push_back("Cand" + std::to_string(c));
  }
  for (std::size_t i = 0; i < spec.tuples; ++i) {
    FactTuple ft;
    ft.subject = spec.relation_id + "-subj-" + std::to_string(i);
    ft.relation_id = spec.relation_id;
    ft.object_gold = rd.spec.candidates[i % spec.candidates];
    ft.subj_obj_overlap = compute_subject_object_overlap(ft);
    rd.tuples.push_back(std::move(ft));
  }
  return rd;
}

Dataset synthetic_dataset(std::size_t relations, std::size_t tuples, std::size_t templates,
                          std::size_t candidates) {
  Dataset ds;
  for (std::size_t r = 0; r < relations; ++r) {
    ds.relations.push_back(synthetic_relation(
        {"R" + std::to_string(r + 10), tuples, templates, candidates}));
  }
  return ds;
}

const std::vector<DuplicateCounts>& benchmark_duplicate_counts() {
  static const std::vector<DuplicateCounts> counts = {
      {"P17", 912, 2, 0},    {"P19", 779, 0, 0},    {"P20", 817, 0, 0},
      {"P27", 958, 0, 0},    {"P30", 959, 4, 0},    {"P36", 471, 14, 1},
      {"P37", 900, 280, 0},  {"P101", 571, 52, 0},  {"P103", 919, 2, 0},
      {"P106", 821, 0, 0},   {"P127", 616, 0, 0},   {"P131", 775, 0, 0},
      {"P136", 859, 2, 0},   {"P138", 461, 23, 2},  {"P140", 432, 10, 0},
      {"P159", 801, 4, 0},   {"P176", 925, 19, 8},  {"P178", 588, 12, 1},
      {"P264", 53, 2, 0},    {"P276", 764, 74, 1},  {"P279", 900, 4, 0},
      {"P361", 746, 64, 0},  {"P364", 756, 6, 0},   {"P407", 857, 31, 0},
      {"P413", 952, 0, 0},   {"P449", 801, 9, 1},   {"P495", 905, 2, 0},
      {"P740", 843, 0, 0},   {"P937", 853, 21, 0},  {"P1376", 179, 8, 1},
      {"P1412", 924, 2, 0},
  };
  return counts;
}

Dataset duplicate_fixture(const std::vector<DuplicateCounts>& counts) {
  Dataset ds;
  for (const auto& c : counts) {
    RelationData rd = synthetic_relation({c.relation_id, 0, 3, 10});
    const auto& cand = rd.spec.candidates;
    std::size_t next_subject = 0;
    auto add = [&](const std::string& subject, std::size_t obj) {
      rd.tuples.push_back({subject, c.relation_id, cand[obj % cand.size()], false});
    };
    auto fresh = [&] { return std::string(c.relation_id) + "-s" + std::to_string(next_subject++); };
    std::size_t dup_left = c.duplicates;
    for (std::size_t e = 0; e < c.exact; ++e) {
      const auto s = fresh();
      add(s, e);
      add(s, e);
      dup_left -= 2;
    }
    if (dup_left % 2 == 1) {
      const auto s = fresh();
      add(s, 0);
      add(s, 1);
      add(s, 2);
      dup_left -= 3;
    }
    for (std::size_t p = 0; p < dup_left / 2; ++p) {
      const auto s = fresh();
      add(s, p);
      add(s, p + 1);
    }
    while (rd.tuples.size() < c.entries) add(fresh(), rd.tuples.size());
    for (auto& t : rd.tuples) t.subj_obj_overlap = compute_subject_object_overlap(t);
    ds.relations.push_back(std::move(rd));
  }
  std::sort(ds.relations.begin(), ds.relations.end(), [](const auto& a, const auto& b) {
    return a.spec.relation_id < b.spec.relation_id;
  });
  return ds;
}

std::vector<Prediction> run_mock(const Dataset& dataset, const std::string& spec,
                                 std::uint64_t seed, const fs::path& cache, int n_passages) {
  EndpointOptions eo;
  eo.seed = seed;
  auto endpoint = make_endpoint(spec, eo);
  RunOptions ro;
  ro.seed = seed;
  ro.n_passages = n_passages;
  const auto queries = render_all(dataset);
  return run_scorer(dataset, queries, *endpoint, cache, ro);
}

std::vector<Prediction> predictions_from_answers(
    const Dataset& dataset, const std::vector<std::vector<std::vector<std::string>>>& answers) {
  std::vector<Prediction> out;
  for (std::size_t r = 0; r < dataset.relations.size(); ++r) {
    const auto& rel = dataset.relations[r];
    for (std::size_t t = 0; t < rel.tuples.size(); ++t) {
      for (std::size_t k = 0; k < answers[r][t].size(); ++k) {
        if (answers[r][t][k].empty()) continue;  // missing prediction
        Prediction p;
        p.key = {rel.spec.relation_id, rel.tuples[t].subject, k};
        p.chosen = answers[r][t][k];
        p.scores.assign(rel.spec.candidates.size(), 0.0);
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace paracons::testing
