#pragma once

// Command implementations behind the paracons CLI. Each command reads its
// inputs, writes artifacts atomically under `out`, and throws paracons::Error
// subclasses whose code() is the process exit status.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "paracons/corpus.hpp"
#include "paracons/protocol.hpp"
#include "paracons/retrieval.hpp"

namespace paracons::app {

struct Config {
  std::filesystem::path data;
  std::filesystem::path out;
  std::filesystem::path cache;  // baseline prediction cache (analysis commands)
  std::string endpoint;
  std::uint64_t seed = 0;
  int n_passages = kDefaultPassages;
  double drop_threshold = kDefaultDropThreshold;
  std::string mode;                       // intervene: relevant | irr_cohesive | irr_incohesive | all
  std::vector<std::string> formats{"text", "json"};
  std::string mask_token{kDefaultMaskToken};
  bool known_flags = true;
  std::size_t batch_size = 32;
  std::size_t concurrency = 4;
  std::size_t baseline_samples = kDefaultBaselineSamples;
  std::string label;  // model label in report rows; defaults to the endpoint identity
};

struct Outcome {
  std::vector<std::filesystem::path> artifacts;
  std::string summary;  // one-paragraph human summary for stdout
};

Outcome cmd_curate(const Config& cfg);
Outcome cmd_evaluate(const Config& cfg);
Outcome cmd_analyze(const Config& cfg);
Outcome cmd_intervene(const Config& cfg);
Outcome cmd_retriever_metrics(const Config& cfg);
Outcome cmd_rank_report(const Config& cfg);

/// Answers score requests with a mock scorer. Query context (relation,
/// subject, template, gold) is recovered from the request id when it has the
/// harness form REL:tuple:template, otherwise from the prompt text.
class MockServer {
 public:
  MockServer(const Dataset& dataset, const std::string& mock_spec, std::uint64_t seed,
             std::string mask_token = std::string(kDefaultMaskToken));
  ~MockServer();

  /// One response line for one request line. Malformed requests produce a
  /// response carrying an error field.
  std::string handle_line(std::string_view line) const;

  /// Newline-separated request body to response body.
  std::string handle_body(std::string_view body) const;

  /// Reads requests from `in` until EOF, one response line per request.
  void serve_stream(std::istream& in, std::ostream& out) const;

  /// Blocks serving POST requests on 127.0.0.1:port.
  void serve_http(int port) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace paracons::app
