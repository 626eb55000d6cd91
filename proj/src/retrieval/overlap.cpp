#include <algorithm>
#include <map>

#include "paracons/kernels.hpp"
#include "paracons/retrieval.hpp"

namespace paracons {

std::optional<double> multiset_overlap(std::span<const std::string> a,
                                       std::span<const std::string> b) {
  const std::size_t denom = std::max(a.size(), b.size());
  if (denom == 0) return std::nullopt;
  std::map<std::string_view, std::size_t> counts;
  for (const auto& s : a) ++counts[s];
  std::size_t shared = 0;
  for (const auto& s : b) {
    auto it = counts.find(s);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++shared;
    }
  }
  return static_cast<double>(shared) / static_cast<double>(denom);
}

RetrieverPairMetrics retriever_pair_metrics(const Prediction& a, const Prediction& b) {
  RetrieverPairMetrics m;
  if (a.passages && b.passages) {
    std::vector<std::string> ids_a, ids_b, titles_a, titles_b;
    for (const auto& p : *a.passages) {
      ids_a.push_back(p.passage_id);
      titles_a.push_back(p.title);
    }
    for (const auto& p : *b.passages) {
      ids_b.push_back(p.passage_id);
      titles_b.push_back(p.title);
    }
    m.count_mismatch = ids_a.size() != ids_b.size();
    m.id_overlap = multiset_overlap(ids_a, ids_b);
    m.title_overlap = multiset_overlap(titles_a, titles_b);
  }
  if (a.query_embedding && b.query_embedding) {
    m.embedding_similarity = kernels::cosine(*a.query_embedding, *b.query_embedding);
  }
  return m;
}

bool has_retrieval(const EvalSet& eval) {
  for (const auto& rel : eval.relations) {
    for (const auto& row : rel.grid) {
      for (const auto& p : row) {
        if (p && (p->passages || p->query_embedding)) return true;
      }
    }
  }
  return false;
}

AnnotationStats annotate_pairs(const EvalSet& eval,
                               std::vector<std::vector<PairRecord>>& pairs) {
  AnnotationStats stats;
  for (std::size_t r = 0; r < eval.relations.size() && r < pairs.size(); ++r) {
    const auto& rel = eval.relations[r];
    std::vector<std::vector<std::optional<RankRecord>>> ranks(rel.grid.size());
    for (std::size_t t = 0; t < rel.grid.size(); ++t) {
      ranks[t].resize(rel.grid[t].size());
      for (std::size_t k = 0; k < rel.grid[t].size(); ++k) {
        if (const auto& p = rel.at(t, k)) {
          ranks[t][k] = frequency_rank(*p, rel.spec().candidates,
                                       rel.data->tuples[t].object_gold);
        }
      }
    }
    for (auto& pr : pairs[r]) {
      const auto& a = rel.at(pr.tuple, pr.i);
      const auto& b = rel.at(pr.tuple, pr.j);
      if (!a || !b) continue;
      const auto m = retriever_pair_metrics(*a, *b);
      pr.id_overlap = m.id_overlap;
      pr.title_overlap = m.title_overlap;
      pr.embedding_similarity = m.embedding_similarity;
      if (m.count_mismatch) ++stats.count_mismatches;
      if (m.id_overlap) ++stats.pairs_with_passages;
      if (m.embedding_similarity) ++stats.pairs_with_embeddings;
      const auto& ra = ranks[pr.tuple][pr.i];
      const auto& rb = ranks[pr.tuple][pr.j];
      if (ra && rb) {
        pr.pred_rank_mean = (ra->pred_rank + rb->pred_rank) / 2.0;
        pr.gold_rank_mean = (ra->gold_rank + rb->gold_rank) / 2.0;
      }
    }
  }
  return stats;
}

}  // namespace paracons
