#pragma once

#include <stdexcept>
#include <string>

namespace paracons {

// Process exit codes are a stable contract of the CLI.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kTransport = 3,
  kProtocol = 4,
  kDigestMismatch = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Malformed input data, invalid configuration, or a violated invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ExitCode::kValidation, what) {}
};

/// The scorer could not be reached (process died, connection refused, ...).
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ExitCode::kTransport, what) {}
};

/// The scorer answered, but the answer violates the wire protocol.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& request_id, const std::string& what)
      : Error(ExitCode::kProtocol,
              request_id.empty() ? what : "request " + request_id + ": " + what),
        request_id_(request_id) {}
  const std::string& request_id() const { return request_id_; }

 private:
  std::string request_id_;
};

class DigestMismatchError : public Error {
 public:
  explicit DigestMismatchError(const std::string& what)
      : Error(ExitCode::kDigestMismatch, what) {}
};

}  // namespace paracons
