#include "httplib.h"
#include "paracons/endpoint.hpp"
#include "paracons/error.hpp"

namespace paracons {

HttpEndpoint::HttpEndpoint(std::string url, std::size_t concurrency,
                           std::chrono::milliseconds timeout)
    : url_(std::move(url)), concurrency_(std::max<std::size_t>(1, concurrency)),
      timeout_(timeout) {
  const auto scheme_end = url_.find("://");
  if (scheme_end == std::string::npos || url_.compare(0, scheme_end, "http") != 0)
    throw ValidationError("http endpoint needs an http://host[:port]/path URL, got '" + url_ +
                          "'");
  const auto path_start = url_.find('/', scheme_end + 3);
  origin_ = url_.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url_.substr(path_start);
}

std::vector<ScoreResponse> HttpEndpoint::score(std::span<const ScoreJob> jobs) {
  httplib::Client client(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto res = client.Post(path_, encode_batch(jobs), "application/x-ndjson");
  if (!res)
    throw TransportError("POST " + url_ + " failed: " + httplib::to_string(res.error()));
  if (res->status >= 500)
    throw TransportError("POST " + url_ + " returned HTTP " + std::to_string(res->status));
  if (res->status != 200)
    throw ProtocolError(jobs.empty() ? std::string{} : jobs.front().request.request_id,
                        "POST " + url_ + " returned HTTP " + std::to_string(res->status));
  return decode_batch(jobs, res->body);
}

}  // namespace paracons
