#include <map>

#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"
#include "paracons/fileio.hpp"

namespace paracons {

std::unique_ptr<Endpoint> make_endpoint(std::string_view spec, const EndpointOptions& options) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ValidationError("endpoint must be mock:NAME, exec:CMD or http:URL, got '" +
                          std::string(spec) + "'");
  const std::string_view scheme = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (rest.empty()) throw ValidationError("empty endpoint after '" + std::string(scheme) + ":'");
  if (scheme == "mock")
    return std::make_unique<MockScorer>(parse_mock_spec(rest), options.seed);
  if (scheme == "exec")
    return std::make_unique<ExecEndpoint>(std::string(rest), options.timeout);
  if (scheme == "http")
    return std::make_unique<HttpEndpoint>(std::string(rest), options.http_concurrency,
                                          options.timeout);
  throw ValidationError("unknown endpoint scheme '" + std::string(scheme) + "'");
}

std::string encode_batch(std::span<const ScoreJob> jobs) {
  std::string body;
  for (const auto& job : jobs) {
    body += to_line(job.request);
    body += '\n';
  }
  return body;
}

std::vector<ScoreResponse> decode_batch(std::span<const ScoreJob> jobs, std::string_view body) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < jobs.size(); ++i) index.emplace(jobs[i].request.request_id, i);
  std::vector<std::optional<ScoreResponse>> slots(jobs.size());
  std::size_t position = 0;
  for (const std::string& line : split_lines(body)) {
    if (line.empty()) continue;
    const std::string fallback =
        position < jobs.size() ? jobs[position].request.request_id : std::string{};
    ++position;
    ScoreResponse r = parse_response(line, fallback);
    auto it = index.find(r.request_id);
    if (it == index.end())
      throw ProtocolError(r.request_id, "response for an unknown request id");
    if (slots[it->second])
      throw ProtocolError(r.request_id, "duplicate response");
    slots[it->second] = std::move(r);
  }
  std::vector<ScoreResponse> out;
  out.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!slots[i]) throw ProtocolError(jobs[i].request.request_id, "no response received");
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace paracons
