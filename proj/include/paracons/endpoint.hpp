#pragma once

// Scorer endpoints. A spec string selects the implementation:
//   mock:NAME[:ARG][?key=value&...]   in-process deterministic scorer
//   exec:COMMAND                      child process speaking JSONL on stdio
//   http:URL                          JSONL batch POSTed to URL

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paracons/protocol.hpp"

namespace paracons {

// Harness-side knowledge about a query. Only in-process mocks consume it;
// remote endpoints see nothing but the ScoreRequest.
struct QueryContext {
  std::string relation_id;
  std::string subject;
  std::size_t template_index = 0;
  std::string gold;
};

struct ScoreJob {
  ScoreRequest request;
  std::optional<QueryContext> context;
};

class Endpoint {
 public:
  virtual ~Endpoint() = default;

  /// Stable identity recorded in cache headers (stale-cache detection).
  virtual std::string identity() const = 0;

  /// One response per job, in job order. Throws TransportError when the
  /// scorer is unreachable and ProtocolError on malformed answers.
  virtual std::vector<ScoreResponse> score(std::span<const ScoreJob> jobs) = 0;

  /// Upper bound on batches the runner may have in flight at once.
  virtual std::size_t max_concurrency() const { return 1; }
};

struct EndpointOptions {
  std::uint64_t seed = 0;
  std::size_t http_concurrency = 4;
  std::chrono::milliseconds timeout{60000};
};

/// Throws ValidationError on an unknown scheme or bad mock configuration.
std::unique_ptr<Endpoint> make_endpoint(std::string_view spec,
                                        const EndpointOptions& options = {});

// ---------------------------------------------------------------------------
// Mock scorers.

enum class MockKind { kOracle, kHash, kParametric, kFixed, kReader };

struct MockConfig {
  MockKind kind = MockKind::kOracle;
  double q = 1.0;            // parametric: probability the gold wins a query
  std::string fixed_answer;  // fixed: answer that always wins
  // Retrieval synthesis.
  double reuse = 0.5;        // per-slot probability of the tuple's shared passage
  bool hub = false;          // slot 0 holds a passage shared by the relation
  int embedding_dim = 8;
  bool free_generation = false;  // emit free_generation = chosen answer
  bool ignore_forced = false;    // pretend not to support forced passages

  std::string canonical() const;
};

/// Parses the part after "mock:". Throws ValidationError.
MockConfig parse_mock_spec(std::string_view spec);

class MockScorer : public Endpoint {
 public:
  MockScorer(MockConfig config, std::uint64_t seed);

  std::string identity() const override;
  std::vector<ScoreResponse> score(std::span<const ScoreJob> jobs) override;
  std::size_t max_concurrency() const override { return 8; }

  ScoreResponse score_one(const ScoreJob& job) const;

  /// Passages the mock retriever returns for a query; never depends on the
  /// chosen answer.
  std::vector<Passage> retrieve(const QueryContext& ctx,
                                std::span<const std::string> candidates,
                                int n_passages) const;

  std::vector<double> embed(const QueryContext& ctx) const;

  const MockConfig& config() const { return config_; }

 private:
  MockConfig config_;
  std::uint64_t seed_;
};

class ExecEndpoint : public Endpoint {
 public:
  ExecEndpoint(std::string command, std::chrono::milliseconds timeout);
  ~ExecEndpoint() override;
  ExecEndpoint(const ExecEndpoint&) = delete;
  ExecEndpoint& operator=(const ExecEndpoint&) = delete;

  std::string identity() const override { return "exec:" + command_; }
  std::vector<ScoreResponse> score(std::span<const ScoreJob> jobs) override;

 private:
  struct Process;
  void ensure_started();
  void stop();

  std::string command_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<Process> proc_;
  std::mutex mu_;
};

class HttpEndpoint : public Endpoint {
 public:
  HttpEndpoint(std::string url, std::size_t concurrency, std::chrono::milliseconds timeout);

  std::string identity() const override { return "http:" + url_; }
  std::vector<ScoreResponse> score(std::span<const ScoreJob> jobs) override;
  std::size_t max_concurrency() const override { return concurrency_; }

 private:
  std::string url_;
  std::string origin_;  // scheme://host:port
  std::string path_;
  std::size_t concurrency_;
  std::chrono::milliseconds timeout_;
};

/// Serializes jobs as a JSONL request body, one line per job.
std::string encode_batch(std::span<const ScoreJob> jobs);

/// Parses a JSONL response body and matches lines to jobs by request_id.
/// Throws ProtocolError on missing, duplicate, or unknown ids.
std::vector<ScoreResponse> decode_batch(std::span<const ScoreJob> jobs,
                                        std::string_view body);

}  // namespace paracons
