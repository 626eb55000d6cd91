#include <functional>

#include "paracons/metrics.hpp"

namespace paracons {
namespace {

using PairPredicate = std::function<bool(const RelationEval&, const PairRecord&)>;

Stratum make_stratum(std::string name, const EvalSet& eval,
                     std::span<const std::vector<PairRecord>> pairs,
                     const std::vector<std::size_t>& scope, const PairPredicate& in) {
  Stratum s;
  s.name = std::move(name);
  std::vector<double> per_relation;
  for (std::size_t r : scope) {
    std::size_t n = 0, agree = 0;
    for (const auto& p : pairs[r]) {
      if (!in(eval.relations[r], p)) continue;
      ++n;
      agree += p.agree ? 1 : 0;
    }
    if (n == 0) continue;
    s.pairs += n;
    per_relation.push_back(static_cast<double>(agree) / static_cast<double>(n));
  }
  s.relations = per_relation.size();
  s.consistency = mean_std(std::span<const double>(per_relation));
  return s;
}

std::vector<std::size_t> scope_of(const EvalSet& eval,
                                  const std::function<bool(const RelationEval&)>& flagged) {
  std::vector<std::size_t> scope, all;
  for (std::size_t r = 0; r < eval.relations.size(); ++r) {
    all.push_back(r);
    if (flagged(eval.relations[r])) scope.push_back(r);
  }
  return scope.empty() ? all : scope;
}

double overlap_rate(const RelationEval& rel) {
  const auto& tuples = rel.data->tuples;
  if (tuples.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& t : tuples) n += t.subj_obj_overlap ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(tuples.size());
}

}  // namespace

std::vector<StratifiedTable> stratified_consistency(
    const EvalSet& eval, std::span<const std::vector<PairRecord>> pairs) {
  std::vector<StratifiedTable> out;

  {
    StratifiedTable t;
    t.issue = "subj_obj_similarity";
    auto scope = scope_of(eval, [](const RelationEval& r) {
      return r.spec().subject_object_similarity_prone || overlap_rate(r) >= kSubjObjScopeRate;
    });
    t.scope_relations = scope.size();
    t.caption = "Pairwise consistency for tuples with and without subject-object "
                "similarity, over " + std::to_string(scope.size()) + " relations.";
    auto affected = [](const RelationEval& r, const PairRecord& p) {
      return r.data->tuples[p.tuple].subj_obj_overlap;
    };
    t.strata.push_back(make_stratum("subject-object similarity", eval, pairs, scope, affected));
    t.strata.push_back(make_stratum("no subj-obj similarity", eval, pairs, scope,
                                    [&](const RelationEval& r, const PairRecord& p) {
                                      return !affected(r, p);
                                    }));
    out.push_back(std::move(t));
  }

  {
    StratifiedTable t;
    t.issue = "unidiomatic_object";
    auto scope = scope_of(eval, [](const RelationEval& r) {
      return !r.spec().unidiomatic_objects.empty();
    });
    t.scope_relations = scope.size();
    t.caption = "Pairwise consistency for tuples with and without object-level issues, over " +
                std::to_string(scope.size()) + " relations.";
    auto affected = [](const RelationEval& r, const PairRecord& p) {
      return r.spec().is_unidiomatic_object(r.data->tuples[p.tuple].object_gold);
    };
    t.strata.push_back(make_stratum("object issue", eval, pairs, scope, affected));
    t.strata.push_back(make_stratum("no object issue", eval, pairs, scope,
                                    [&](const RelationEval& r, const PairRecord& p) {
                                      return !affected(r, p);
                                    }));
    out.push_back(std::move(t));
  }

  {
    StratifiedTable t;
    t.issue = "unidiomatic_template";
    auto scope = scope_of(eval, [](const RelationEval& r) { return r.spec().has_template_issue(); });
    t.scope_relations = scope.size();
    t.caption = "Pairwise consistency where both, one or none of the compared templates "
                "have a template issue, over " + std::to_string(scope.size()) + " relations.";
    auto bad_count = [](const RelationEval& r, const PairRecord& p) {
      const auto& tpl = r.spec().templates;
      return (tpl[p.i].unidiomatic ? 1 : 0) + (tpl[p.j].unidiomatic ? 1 : 0);
    };
    const char* names[] = {"template issue none", "template issue one", "template issue both"};
    for (int want : {2, 1, 0}) {
      t.strata.push_back(make_stratum(names[want], eval, pairs, scope,
                                      [&, want](const RelationEval& r, const PairRecord& p) {
                                        return bad_count(r, p) == want;
                                      }));
    }
    out.push_back(std::move(t));
  }

  {
    StratifiedTable t;
    t.issue = "semantic_overlap";
    std::vector<std::size_t> flagged, unflagged;
    for (std::size_t r = 0; r < eval.relations.size(); ++r) {
      (eval.relations[r].spec().semantic_overlap ? flagged : unflagged).push_back(r);
    }
    t.scope_relations = eval.relations.size();
    t.caption = "Pairwise consistency over relations with semantic overlap in the answer "
                "options (" + std::to_string(flagged.size()) + ") and without (" +
                std::to_string(unflagged.size()) + ").";
    auto any = [](const RelationEval&, const PairRecord&) { return true; };
    t.strata.push_back(make_stratum("semantic overlap", eval, pairs, flagged, any));
    t.strata.push_back(make_stratum("no semantic overlap", eval, pairs, unflagged, any));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace paracons
