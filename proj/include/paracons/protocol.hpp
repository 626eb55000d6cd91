#pragma once

// Scorer wire protocol. Both transports (stdio JSON-lines and HTTP POST)
// carry one JSON object per line: ScoreRequest upstream, ScoreResponse back.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace paracons {

inline constexpr int kDefaultPassages = 20;

struct Passage {
  std::string passage_id;
  std::string title;
  std::string text;

  bool operator==(const Passage&) const = default;
};

struct ScoreRequest {
  std::string request_id;
  std::string prompt;
  std::vector<std::string> candidates;
  bool want_retrieval = true;
  int n_passages = kDefaultPassages;
  // Intervention extension: the scorer must condition on these passages
  // instead of retrieving, and echo forced_passages_applied = true.
  std::optional<std::vector<Passage>> forced_passages;

  bool operator==(const ScoreRequest&) const = default;
};

struct ScoreResponse {
  std::string request_id;
  std::vector<double> scores;  // aligned with the request's candidates
  std::optional<std::vector<Passage>> passages;
  std::optional<std::vector<double>> query_embedding;
  std::optional<std::string> free_generation;
  std::optional<bool> forced_passages_applied;
  std::optional<std::string> error;  // scorer-side failure report

  bool operator==(const ScoreResponse&) const = default;
};

nlohmann::ordered_json to_json(const Passage& p);
nlohmann::ordered_json to_json(const ScoreRequest& r);
nlohmann::ordered_json to_json(const ScoreResponse& r);

Passage passage_from_json(const nlohmann::json& j);

/// Throws ValidationError on a malformed request line.
ScoreRequest parse_request(std::string_view line);

/// Throws ProtocolError on a malformed response line. `fallback_id` names the
/// request in the error when the line carries no usable request_id.
ScoreResponse parse_response(std::string_view line, const std::string& fallback_id = {});

/// Checks a response against its request: ids match, one finite score per
/// candidate, no scorer-side error. Throws ProtocolError.
void validate_response(const ScoreRequest& request, const ScoreResponse& response);

std::string to_line(const ScoreRequest& r);
std::string to_line(const ScoreResponse& r);

}  // namespace paracons
