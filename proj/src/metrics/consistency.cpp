#include "paracons/metrics.hpp"

namespace paracons {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<PairRecord> pair_records(const RelationEval& rel, Diagnostics* diag) {
  std::vector<PairRecord> out;
  const std::size_t n_tpl = rel.spec().templates.size();
  for (std::size_t t = 0; t < rel.grid.size(); ++t) {
    std::vector<std::size_t> present;
    for (std::size_t k = 0; k < n_tpl; ++k) {
      if (rel.at(t, k)) present.push_back(k);
    }
    if (present.size() < n_tpl && diag) ++diag->incomplete_tuples;
    if (present.size() < 2) {
      if (diag) ++diag->excluded_tuples;
      continue;
    }
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        PairRecord pr;
        pr.tuple = t;
        pr.i = present[a];
        pr.j = present[b];
        pr.agree = rel.at(t, pr.i)->chosen == rel.at(t, pr.j)->chosen;
        pr.correct_i = rel.correct(t, pr.i);
        pr.correct_j = rel.correct(t, pr.j);
        out.push_back(pr);
      }
    }
  }
  return out;
}

std::optional<double> relation_consistency(std::span<const PairRecord> pairs) {
  std::size_t agree = 0;
  for (const auto& p : pairs) agree += p.agree ? 1 : 0;
  return ratio(agree, pairs.size());
}

std::optional<double> accuracy_lama(const RelationEval& rel, Diagnostics* diag) {
  const std::size_t lama = rel.spec().lama_template();
  std::size_t considered = 0, correct = 0;
  for (std::size_t t = 0; t < rel.grid.size(); ++t) {
    if (!rel.at(t, lama)) {
      if (diag) ++diag->missing_lama;
      continue;
    }
    ++considered;
    if (rel.correct(t, lama)) ++correct;
  }
  return ratio(correct, considered);
}

std::optional<double> consistent_and_accurate(const RelationEval& rel, Diagnostics*) {
  // Same tuple set as accuracy_lama, so the result never exceeds it; missing
  // non-canonical predictions are skipped rather than counted wrong.
  const std::size_t lama = rel.spec().lama_template();
  std::size_t considered = 0, correct = 0;
  for (std::size_t t = 0; t < rel.grid.size(); ++t) {
    if (!rel.at(t, lama)) continue;
    bool all_correct = true;
    for (std::size_t k = 0; k < rel.grid[t].size(); ++k) {
      if (rel.at(t, k) && !rel.correct(t, k)) all_correct = false;
    }
    ++considered;
    if (all_correct) ++correct;
  }
  return ratio(correct, considered);
}

KnowledgePartition knowledge_partition(const RelationEval& rel,
                                       std::span<const PairRecord> pairs) {
  KnowledgePartition out;
  std::vector<char> knows(rel.grid.size(), 0);
  for (std::size_t t = 0; t < rel.grid.size(); ++t) {
    for (std::size_t k = 0; k < rel.grid[t].size(); ++k) {
      if (rel.correct(t, k)) {
        knows[t] = 1;
        break;
      }
    }
    (knows[t] ? out.knowledgeable : out.unknowledgeable).push_back(t);
  }
  std::size_t k_pairs = 0, k_agree = 0, k_both = 0, u_pairs = 0, u_agree = 0;
  for (const auto& p : pairs) {
    if (knows[p.tuple]) {
      ++k_pairs;
      k_agree += p.agree ? 1 : 0;
      k_both += (p.correct_i && p.correct_j) ? 1 : 0;
    } else {
      ++u_pairs;
      u_agree += p.agree ? 1 : 0;
    }
  }
  out.know_cons = ratio(k_agree, k_pairs);
  out.k_know_cons = ratio(k_both, k_pairs);
  out.unk_cons = ratio(u_agree, u_pairs);
  return out;
}

RelationMetrics compute_relation_metrics(const RelationEval& rel,
                                         std::span<const PairRecord> pairs) {
  RelationMetrics m;
  m.relation_id = rel.spec().relation_id;
  m.tuples = rel.grid.size();
  m.pairs = pairs.size();
  // Recount exclusions so the diagnostics are self-contained.
  pair_records(rel, &m.diagnostics);
  m.consistency = relation_consistency(pairs);
  m.accuracy = accuracy_lama(rel, &m.diagnostics);
  m.consistent_and_accurate = consistent_and_accurate(rel, &m.diagnostics);
  auto kp = knowledge_partition(rel, pairs);
  m.know_cons = kp.know_cons;
  m.k_know_cons = kp.k_know_cons;
  m.unk_cons = kp.unk_cons;
  m.knowledgeable = kp.knowledgeable.size();
  m.unknowledgeable = kp.unknowledgeable.size();
  return m;
}

}  // namespace paracons
