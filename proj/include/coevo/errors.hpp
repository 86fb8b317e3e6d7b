#pragma once
// errors.hpp — exception types shared across the engine.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coevo {

// Malformed N-Triples input. line is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(size_t line, const std::string& reason)
      : std::runtime_error("parse error at line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  size_t line_;
  std::string reason_;
};

// Changeset folder with unparseable names or gaps in the sequence.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or contradictory configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A resolution policy could not produce a value.
class ResolutionError : public std::runtime_error {
 public:
  enum class Kind { EmptyCandidates, MetadataMissing, NonNumericCandidate, BadPolicyParams };

  ResolutionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace coevo
