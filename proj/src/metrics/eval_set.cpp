#include <map>
#include <string_view>

#include "paracons/metrics.hpp"

namespace paracons {

bool RelationEval::correct(std::size_t tuple, std::size_t tpl) const {
  const auto& p = grid[tuple][tpl];
  return p && p->chosen == data->tuples[tuple].object_gold;
}

EvalSet build_eval_set(const Dataset& dataset, std::span<const Prediction> predictions) {
  EvalSet out;
  out.relations.reserve(dataset.relations.size());
  std::map<std::string_view, std::size_t> rel_index;
  std::vector<std::map<std::string_view, std::size_t>> subject_index(dataset.relations.size());
  for (std::size_t r = 0; r < dataset.relations.size(); ++r) {
    const auto& rd = dataset.relations[r];
    RelationEval re;
    re.data = &rd;
    re.grid.assign(rd.tuples.size(),
                   std::vector<std::optional<Prediction>>(rd.spec.templates.size()));
    out.relations.push_back(std::move(re));
    rel_index.emplace(rd.spec.relation_id, r);
    for (std::size_t t = 0; t < rd.tuples.size(); ++t) {
      subject_index[r].emplace(rd.tuples[t].subject, t);
    }
  }
  for (const auto& p : predictions) {
    auto rit = rel_index.find(p.key.relation_id);
    if (rit == rel_index.end()) {
      ++out.unmatched_predictions;
      continue;
    }
    auto sit = subject_index[rit->second].find(p.key.subject);
    auto& rel = out.relations[rit->second];
    if (sit == subject_index[rit->second].end() ||
        p.key.template_index >= rel.spec().templates.size()) {
      ++out.unmatched_predictions;
      continue;
    }
    rel.grid[sit->second][p.key.template_index] = p;
  }
  return out;
}

}  // namespace paracons
