#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncv {

enum class ErrorKind {
  // scenario / CSV files
  MissingKey,
  DuplicateKey,
  BadNumber,
  UnitViolation,
  InconsistentPair,
  UnknownKey,
  Syntax,
  Io,
  // model
  InvalidScenario,
  DegenerateHistory,
  DayOutOfRange,
  MissingCardParameters,
  // sensitivity
  InfeasiblePerturbation,
  ZeroBaselineROI,
  UndefinedMetric,
  // rendering
  EmptySeries,
  MismatchedSeries,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for the kinds raised while reading scenario or CSV input.
bool is_input_error(ErrorKind kind) noexcept;

/// The single exception type thrown by the library. File errors carry the
/// offending key (may be empty) and 1-based line (0 when not line-bound).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string key = {}, int line = 0,
        std::string file = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  const std::string& file() const noexcept { return file_; }

  Error with_file(std::string file) const;

 private:
  ErrorKind kind_;
  std::string key_;
  int line_;
  std::string file_;
};

}  // namespace ncv
