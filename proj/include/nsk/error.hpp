#pragma once

#include <stdexcept>
#include <string>

namespace nsk {

// Error taxonomy shared by the C++ core, the C API status codes and the CLI
// exit codes (parse errors exit 2, everything else exits 1).
class Error : public std::runtime_error {
 public:
  enum class Code { io, parse, validation, config, domain };

  Error(Code code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Filesystem and stream failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(Code::io, msg) {}
};

// Malformed documents: JSON syntax, unknown keys, wrong types, bad versions.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(Code::parse, msg) {}
};

// Well-formed documents whose contents break a structural invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(Code::validation, msg) {}
};

// Inconsistent combinations of otherwise valid pieces (bindings, ranges,
// line counts).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(Code::config, msg) {}
};

// Runtime contract violations: non-input targets, time moving backwards,
// out-of-range signals.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(Code::domain, msg) {}
};

}  // namespace nsk
