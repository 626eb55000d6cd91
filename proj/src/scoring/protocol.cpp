#include "paracons/protocol.hpp"

#include <cmath>

#include "paracons/error.hpp"

namespace paracons {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const Passage& p) {
  return ordered_json{{"passage_id", p.passage_id}, {"title", p.title}, {"text", p.text}};
}

namespace {

ordered_json passages_json(const std::vector<Passage>& ps) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : ps)
    arr.push_back({{"passage_id", p.passage_id}, {"title", p.title}, {"text", p.text}});
  return arr;
}

std::vector<Passage> passages_from(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("passages must be an array");
  std::vector<Passage> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(passage_from_json(p));
  return out;
}

}  // namespace

Passage passage_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("passage must be an object");
  return {j.at("passage_id").get<std::string>(), j.value("title", std::string{}),
          j.value("text", std::string{})};
}

ordered_json to_json(const ScoreRequest& r) {
  ordered_json j;
  j["request_id"] = r.request_id;
  j["prompt"] = r.prompt;
  j["candidates"] = r.candidates;
  j["want_retrieval"] = r.want_retrieval;
  j["n_passages"] = r.n_passages;
  if (r.forced_passages) j["forced_passages"] = passages_json(*r.forced_passages);
  return j;
}

ordered_json to_json(const ScoreResponse& r) {
  ordered_json j;
  j["request_id"] = r.request_id;
  j["scores"] = r.scores;
  if (r.passages) j["passages"] = passages_json(*r.passages);
  if (r.query_embedding) j["query_embedding"] = *r.query_embedding;
  if (r.free_generation) j["free_generation"] = *r.free_generation;
  if (r.forced_passages_applied) j["forced_passages_applied"] = *r.forced_passages_applied;
  if (r.error) j["error"] = *r.error;
  return j;
}

std::string to_line(const ScoreRequest& r) { return to_json(r).dump(); }
std::string to_line(const ScoreResponse& r) { return to_json(r).dump(); }

ScoreRequest parse_request(std::string_view line) {
  try {
    const json j = json::parse(line);
    ScoreRequest r;
    r.request_id = j.at("request_id").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.candidates = j.at("candidates").get<std::vector<std::string>>();
    r.want_retrieval = j.value("want_retrieval", true);
    r.n_passages = j.value("n_passages", kDefaultPassages);
    if (auto it = j.find("forced_passages"); it != j.end() && !it->is_null())
      r.forced_passages = passages_from(*it);
    if (r.candidates.empty()) throw std::invalid_argument("empty candidate list");
    if (r.want_retrieval && r.n_passages < 1)
      throw std::invalid_argument("n_passages must be >= 1 when retrieval is wanted");
    return r;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("malformed score request: ") + e.what());
  }
}

ScoreResponse parse_response(std::string_view line, const std::string& fallback_id) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(fallback_id, std::string("unparseable response: ") + e.what());
  }
  std::string id = fallback_id;
  if (j.is_object()) {
    if (auto it = j.find("request_id"); it != j.end() && it->is_string())
      id = it->get<std::string>();
  }
  try {
    if (!j.is_object()) throw std::invalid_argument("response must be a JSON object");
    ScoreResponse r;
    r.request_id = j.at("request_id").get<std::string>();
    if (auto it = j.find("error"); it != j.end() && it->is_string()) {
      r.error = it->get<std::string>();
      return r;
    }
    const json& scores = j.at("scores");
    if (!scores.is_array()) throw std::invalid_argument("scores must be an array");
    for (const auto& s : scores) {
      if (!s.is_number()) throw std::invalid_argument("non-finite or non-numeric score");
      r.scores.push_back(s.get<double>());
    }
    if (auto it = j.find("passages"); it != j.end() && !it->is_null())
      r.passages = passages_from(*it);
    if (auto it = j.find("query_embedding"); it != j.end() && !it->is_null())
      r.query_embedding = it->get<std::vector<double>>();
    if (auto it = j.find("free_generation"); it != j.end() && it->is_string())
      r.free_generation = it->get<std::string>();
    if (auto it = j.find("forced_passages_applied"); it != j.end() && it->is_boolean())
      r.forced_passages_applied = it->get<bool>();
    return r;
  } catch (const std::exception& e) {
    throw ProtocolError(id, std::string("malformed response: ") + e.what());
  }
}

void validate_response(const ScoreRequest& request, const ScoreResponse& response) {
  const std::string& id = request.request_id;
  if (response.error) throw ProtocolError(id, "scorer reported error: " + *response.error);
  if (response.request_id != id)
    throw ProtocolError(id, "response carries request_id '" + response.request_id + "'");
  if (response.scores.size() != request.candidates.size())
    throw ProtocolError(id, "expected " + std::to_string(request.candidates.size()) +
                                " scores, got " + std::to_string(response.scores.size()));
  for (double s : response.scores)
    if (!std::isfinite(s)) throw ProtocolError(id, "non-finite score");
  if (response.query_embedding)
    for (double v : *response.query_embedding)
      if (!std::isfinite(v)) throw ProtocolError(id, "non-finite embedding component");
}

}  // namespace paracons
