#include <cmath>

#include "paracons/error.hpp"
#include "paracons/scoring.hpp"

namespace paracons {

using nlohmann::json;
using nlohmann::ordered_json;

std::string select_constrained(const ScoreResponse& response,
                               std::span<const std::string> candidates) {
  if (response.scores.size() != candidates.size())
    throw ProtocolError(response.request_id,
                        "expected " + std::to_string(candidates.size()) + " scores, got " +
                            std::to_string(response.scores.size()));
  if (candidates.empty()) throw ProtocolError(response.request_id, "no candidates");
  std::size_t best = 0;
  for (std::size_t i = 0; i < response.scores.size(); ++i) {
    if (!std::isfinite(response.scores[i]))
      throw ProtocolError(response.request_id, "non-finite score");
    if (response.scores[i] > response.scores[best]) best = i;
  }
  return candidates[best];
}

FreeAgreement check_free_agreement(const Dataset& dataset,
                                   std::span<const Prediction> predictions) {
  FreeAgreement fa;
  for (const auto& p : predictions) {
    if (!p.free_generation) continue;
    const RelationData* rel = dataset.find(p.key.relation_id);
    if (!rel || !rel->spec.is_candidate(*p.free_generation)) continue;
    ++fa.considered;
    if (*p.free_generation == p.chosen) ++fa.matched;
  }
  return fa;
}

ordered_json to_json(const Prediction& p) {
  ordered_json j;
  j["relation_id"] = p.key.relation_id;
  j["subject"] = p.key.subject;
  j["template_index"] = p.key.template_index;
  j["chosen"] = p.chosen;
  j["scores"] = p.scores;
  if (p.passages) {
    ordered_json arr = ordered_json::array();
    for (const auto& ps : *p.passages) arr.push_back(to_json(ps));
    j["passages"] = std::move(arr);
  }
  if (p.query_embedding) j["query_embedding"] = *p.query_embedding;
  if (p.free_generation) j["free_generation"] = *p.free_generation;
  return j;
}

Prediction prediction_from_json(const json& j) {
  Prediction p;
  p.key.relation_id = j.at("relation_id").get<std::string>();
  p.key.subject = j.at("subject").get<std::string>();
  p.key.template_index = j.at("template_index").get<std::size_t>();
  p.chosen = j.at("chosen").get<std::string>();
  p.scores = j.at("scores").get<std::vector<double>>();
  if (auto it = j.find("passages"); it != j.end() && it->is_array()) {
    std::vector<Passage> ps;
    for (const auto& x : *it) ps.push_back(passage_from_json(x));
    p.passages = std::move(ps);
  }
  if (auto it = j.find("query_embedding"); it != j.end() && it->is_array())
    p.query_embedding = it->get<std::vector<double>>();
  if (auto it = j.find("free_generation"); it != j.end() && it->is_string())
    p.free_generation = it->get<std::string>();
  return p;
}

}  // namespace paracons
