#include <map>
#include <utility>

#include "paracons/corpus.hpp"
#include "paracons/error.hpp"

namespace paracons {

std::size_t CurationReport::total_entries() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.entries;
  return n;
}

std::size_t CurationReport::total_retained() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.retained;
  return n;
}

std::size_t CurationReport::retained_relations() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.dropped ? 0 : 1;
  return n;
}

CurationResult deduplicate(const Dataset& dataset, double drop_threshold) {
  if (!(drop_threshold > 0.0 && drop_threshold < 1.0))
    throw ValidationError("drop threshold must lie in (0, 1), got " +
                          std::to_string(drop_threshold));
  CurationResult result;
  result.report.drop_threshold = drop_threshold;
  for (const RelationData& rel : dataset.relations) {
    std::map<std::string_view, std::size_t> per_subject;
    std::map<std::pair<std::string_view, std::string_view>, std::size_t> per_fact;
    for (const auto& t : rel.tuples) {
      ++per_subject[t.subject];
      ++per_fact[{t.subject, t.object_gold}];
    }

    RelationCuration rc;
    rc.relation_id = rel.spec.relation_id;
    rc.name = rel.spec.name;
    rc.entries = rel.tuples.size();
    for (const auto& [subject, n] : per_subject)
      if (n > 1) rc.duplicates += n;
    for (const auto& [fact, n] : per_fact)
      if (n > 1) rc.exact_duplicates += n - 1;

    RelationData kept;
    kept.spec = rel.spec;
    rc.dropped = rc.duplicate_rate() > drop_threshold;
    if (!rc.dropped) {
      for (const auto& t : rel.tuples)
        if (per_subject[t.subject] == 1) kept.tuples.push_back(t);
    }
    rc.retained = kept.tuples.size();
    rc.removed = rc.entries - rc.retained;
    std::size_t overlapping = 0;
    for (const auto& t : kept.tuples) overlapping += t.subj_obj_overlap ? 1 : 0;
    rc.subj_obj_overlap_rate =
        kept.tuples.empty() ? 0.0 : static_cast<double>(overlapping) / kept.tuples.size();

    result.report.relations.push_back(rc);
    if (!rc.dropped) result.curated.relations.push_back(std::move(kept));
  }
  return result;
}

}  // namespace paracons
