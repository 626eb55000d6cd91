#include <algorithm>
#include <map>

#include "json.hpp"

#include "paracons/digest.hpp"
#include "paracons/error.hpp"
#include "paracons/fileio.hpp"
#include "paracons/retrieval.hpp"
#include "paracons/rng.hpp"

namespace paracons {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view intervention_name(InterventionMode mode) {
  switch (mode) {
    case InterventionMode::kRelevant:
      return "relevant";
    case InterventionMode::kIrrCohesive:
      return "irr_cohesive";
    case InterventionMode::kIrrIncohesive:
      return "irr_incohesive";
  }
  return "?";
}

InterventionMode parse_intervention_mode(std::string_view name) {
  for (auto m : {InterventionMode::kRelevant, InterventionMode::kIrrCohesive,
                 InterventionMode::kIrrIncohesive}) {
    if (name == intervention_name(m)) return m;
  }
  throw ValidationError("unknown intervention mode '" + std::string(name) +
                        "' (expected relevant, irr_cohesive or irr_incohesive)");
}

const PlanEntry* InterventionPlan::find(std::string_view relation_id,
                                        std::string_view subject) const {
  for (const auto& e : entries) {
    if (e.relation_id == relation_id && e.subject == subject) return &e;
  }
  return nullptr;
}

std::string InterventionPlan::digest() const { return sha256_hex(serialize_plan(*this)); }

namespace {

std::vector<Passage> truncated(const std::vector<Passage>& p, int n) {
  const auto keep = std::min(p.size(), static_cast<std::size_t>(std::max(n, 0)));
  return {p.begin(), p.begin() + static_cast<std::ptrdiff_t>(keep)};
}

const std::vector<Passage>& lama_passages(const RelationEval& rel, std::size_t tuple) {
  const auto& p = rel.at(tuple, rel.spec().lama_template());
  if (!p || !p->passages) {
    throw ValidationError("baseline prediction for " + rel.spec().relation_id + " / " +
                          rel.data->tuples[tuple].subject +
                          " (canonical template) carries no passages");
  }
  return *p->passages;
}

}  // namespace

InterventionPlan plan_intervention(const EvalSet& baseline, InterventionMode mode,
                                   std::uint64_t seed, int n_passages) {
  if (n_passages <= 0) throw ValidationError("intervention needs n_passages > 0");
  InterventionPlan plan;
  plan.mode = mode;
  plan.seed = seed;
  plan.n_passages = n_passages;

  std::vector<Passage> pool;
  if (mode == InterventionMode::kIrrIncohesive) {
    std::map<std::string, Passage> unique;
    for (const auto& rel : baseline.relations) {
      for (const auto& row : rel.grid) {
        for (const auto& p : row) {
          if (!p || !p->passages) continue;
          for (const auto& psg : *p->passages) unique.emplace(psg.passage_id, psg);
        }
      }
    }
    if (unique.empty()) throw ValidationError("no retrieved passages to sample from");
    for (auto& [id, psg] : unique) pool.push_back(std::move(psg));
  }

  const std::string mode_name(intervention_name(mode));
  for (const auto& rel : baseline.relations) {
    const auto& tuples = rel.data->tuples;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      PlanEntry e;
      e.relation_id = rel.spec().relation_id;
      e.subject = tuples[t].subject;
      auto rng = Rng::keyed(seed, {mode_name, e.relation_id, e.subject});
      switch (mode) {
        case InterventionMode::kRelevant:
          e.donor_subject = e.subject;
          e.passages = truncated(lama_passages(rel, t), n_passages);
          break;
        case InterventionMode::kIrrCohesive: {
          if (tuples.size() < 2) {
            plan.diagnostics.push_back(e.relation_id + " / " + e.subject +
                                       ": no other subject in the relation; skipped");
            continue;
          }
          std::size_t d = rng.below(tuples.size() - 1);
          if (d >= t) ++d;
          e.donor_subject = tuples[d].subject;
          e.passages = truncated(lama_passages(rel, d), n_passages);
          break;
        }
        case InterventionMode::kIrrIncohesive: {
          std::vector<std::size_t> idx(pool.size());
          for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
          const std::size_t k = std::min(pool.size(), static_cast<std::size_t>(n_passages));
          for (std::size_t i = 0; i < k; ++i) {
            std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
            e.passages.push_back(pool[idx[i]]);
          }
          break;
        }
      }
      plan.entries.push_back(std::move(e));
    }
  }
  return plan;
}

std::string serialize_plan(const InterventionPlan& plan) {
  std::string out;
  ordered_json head{{"type", "plan"},
                    {"mode", intervention_name(plan.mode)},
                    {"seed", plan.seed},
                    {"n_passages", plan.n_passages},
                    {"diagnostics", plan.diagnostics}};
  out += head.dump() + "\n";
  for (const auto& e : plan.entries) {
    ordered_json j{{"relation_id", e.relation_id},
                   {"subject", e.subject},
                   {"donor_subject", e.donor_subject},
                   {"passages", ordered_json::array()}};
    for (const auto& p : e.passages) j["passages"].push_back(to_json(p));
    out += j.dump() + "\n";
  }
  return out;
}

InterventionPlan parse_plan(std::string_view text) {
  InterventionPlan plan;
  bool header = false;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      if (!header) {
        if (j.value("type", "") != "plan") throw ValidationError("missing plan header");
        plan.mode = parse_intervention_mode(j.at("mode").get<std::string>());
        plan.seed = j.at("seed").get<std::uint64_t>();
        plan.n_passages = j.at("n_passages").get<int>();
        plan.diagnostics = j.value("diagnostics", std::vector<std::string>{});
        header = true;
        continue;
      }
      PlanEntry e;
      e.relation_id = j.at("relation_id").get<std::string>();
      e.subject = j.at("subject").get<std::string>();
      e.donor_subject = j.value("donor_subject", "");
      for (const auto& p : j.at("passages")) e.passages.push_back(passage_from_json(p));
      plan.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ValidationError("plan line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (!header) throw ValidationError("empty intervention plan");
  return plan;
}

std::vector<Prediction> run_intervention(const Dataset& dataset, const InterventionPlan& plan,
                                         Endpoint& endpoint,
                                         const std::filesystem::path& cache_path,
                                         RunOptions options, RunStats* stats) {
  std::map<std::pair<std::string_view, std::string_view>, const PlanEntry*> index;
  for (const auto& e : plan.entries) {
    index.emplace(std::pair<std::string_view, std::string_view>(e.relation_id, e.subject), &e);
  }

  auto lookup = [&](const Query& q) -> const PlanEntry* {
    const auto& rel = dataset.relations[q.relation_index];
    auto it = index.find({rel.spec.relation_id, rel.tuples[q.tuple_index].subject});
    return it == index.end() ? nullptr : it->second;
  };
  std::vector<Query> queries;
  for (auto& q : render_all(dataset, options.mask_token)) {
    if (lookup(q)) queries.push_back(std::move(q));
  }
  options.n_passages = plan.n_passages;
  options.variant = "intervention:" + std::string(intervention_name(plan.mode)) + ":" + plan.digest();
  options.forced = [&](const Query& q) -> const std::vector<Passage>* {
    const auto* e = lookup(q);
    return e ? &e->passages : nullptr;
  };
  return run_scorer(dataset, queries, endpoint, cache_path, options, stats);
}

}  // namespace paracons
