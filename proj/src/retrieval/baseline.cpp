#include "paracons/retrieval.hpp"
#include "paracons/rng.hpp"

namespace paracons {
namespace {

struct Slot {
  std::size_t relation;
  std::size_t tuple;
  std::size_t tpl;
};

bool usable(const std::optional<Prediction>& p) {
  return p && (p->passages || p->query_embedding);
}

}  // namespace

std::string_view baseline_name(BaselineMode mode) {
  return mode == BaselineMode::kAll ? "r-all" : "r-subject";
}

BaselineResult random_baseline(const EvalSet& eval, BaselineMode mode,
                               std::size_t n_samples, std::uint64_t seed) {
  BaselineResult out;
  out.mode = mode;
  std::vector<std::vector<Slot>> per_relation(eval.relations.size());
  std::vector<Slot> all;
  std::vector<std::size_t> tuples_with_slots(eval.relations.size(), 0);
  for (std::size_t r = 0; r < eval.relations.size(); ++r) {
    const auto& rel = eval.relations[r];
    for (std::size_t t = 0; t < rel.grid.size(); ++t) {
      bool any = false;
      for (std::size_t k = 0; k < rel.grid[t].size(); ++k) {
        if (!usable(rel.at(t, k))) continue;
        per_relation[r].push_back({r, t, k});
        all.push_back({r, t, k});
        any = true;
      }
      tuples_with_slots[r] += any ? 1 : 0;
    }
  }
  std::size_t total_tuples = 0;
  for (auto n : tuples_with_slots) total_tuples += n;

  for (std::size_t r = 0; r < eval.relations.size(); ++r) {
    const auto& rel = eval.relations[r];
    const auto& own = per_relation[r];
    const bool partner_exists = mode == BaselineMode::kAll ? total_tuples >= 2 && !own.empty()
                                                           : tuples_with_slots[r] >= 2;
    if (!partner_exists) {
      out.skipped_relations.push_back(rel.spec().relation_id);
      continue;
    }
    const auto& pool = mode == BaselineMode::kAll ? all : own;
    auto rng = Rng::keyed(seed, {baseline_name(mode), rel.spec().relation_id});
    for (std::size_t s = 0; s < n_samples; ++s) {
      const Slot a = own[rng.below(own.size())];
      Slot b;
      do {
        b = pool[rng.below(pool.size())];
      } while (b.relation == a.relation && b.tuple == a.tuple);
      const auto& pa = *eval.relations[a.relation].at(a.tuple, a.tpl);
      const auto& pb = *eval.relations[b.relation].at(b.tuple, b.tpl);
      out.samples.push_back({r, retriever_pair_metrics(pa, pb)});
    }
  }
  return out;
}

}  // namespace paracons
