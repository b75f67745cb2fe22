#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newsframe {

enum class Errc {
  // input / usage
  EmptyCorpus,
  EmptyVocabulary,
  MissingField,
  BadDate,
  ParseError,
  InvalidArgument,
  IndexOutOfRange,
  DimensionMismatch,
  LengthMismatch,
  SingleClass,
  OutOfVocabulary,
  NegativeDistance,
  EmptyReport,
  DegenerateScores,
  ZeroVariance,
  TooFewArticles,
  TooFewYears,
  YearNotInSeries,
  NoQuiescentYears,
  NoTrainingPairs,
  EmptyRow,
  EmptyCounts,
  AuthError,
  // runtime
  RateLimited,
  NetworkError,
  ConvergenceFailure,
  NoConvergence,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

// Input and usage problems map to CLI exit code 2, the rest to 3.
bool is_input_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Thrown for HTTP 429. Carries the server's Retry-After hint in seconds (0 if absent).
class RateLimitedError : public Error {
 public:
  RateLimitedError(const std::string& what, double retry_after_s)
      : Error(Errc::RateLimited, what), retry_after_s_(retry_after_s) {}

  double retry_after_seconds() const noexcept { return retry_after_s_; }

 private:
  double retry_after_s_;
};

/// Thrown by the JSONL loader; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace newsframe
