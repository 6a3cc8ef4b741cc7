#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polystate {

enum class ErrorKind {
  DimensionMismatch,
  ImpossibleOutcome,
  InvalidArgument,
  ParseError,
  ValidationError,
  BranchExplosion,
  EmptyEnsemble,
  BipartiteOnly,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Conditioning on a branch of zero probability. `subset` names the polystate
// sector being evaluated when known, empty otherwise.
class ImpossibleOutcome : public Error {
 public:
  explicit ImpossibleOutcome(const std::string& message, std::string subset = {})
      : Error(ErrorKind::ImpossibleOutcome, message), subset_(std::move(subset)) {}

  const std::string& subset() const noexcept { return subset_; }

 private:
  std::string subset_;
};

// Syntax error in a scenario document. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorKind::ParseError, message), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::ImpossibleOutcome: return "impossible-outcome";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ValidationError: return "validation-error";
    case ErrorKind::BranchExplosion: return "branch-explosion";
    case ErrorKind::EmptyEnsemble: return "empty-ensemble";
    case ErrorKind::BipartiteOnly: return "bipartite-only";
  }
  return "unknown";
}

}  // namespace polystate
