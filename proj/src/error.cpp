#include "ncv/error.hpp"

#include <utility>

namespace ncv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::BadNumber: return "BadNumber";
    case ErrorKind::UnitViolation: return "UnitViolation";
    case ErrorKind::InconsistentPair: return "InconsistentPair";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::Io: return "Io";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::DegenerateHistory: return "DegenerateHistory";
    case ErrorKind::DayOutOfRange: return "DayOutOfRange";
    case ErrorKind::MissingCardParameters: return "MissingCardParameters";
    case ErrorKind::InfeasiblePerturbation: return "InfeasiblePerturbation";
    case ErrorKind::ZeroBaselineROI: return "ZeroBaselineROI";
    case ErrorKind::UndefinedMetric: return "UndefinedMetric";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::MismatchedSeries: return "MismatchedSeries";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingKey:
    case ErrorKind::DuplicateKey:
    case ErrorKind::BadNumber:
    case ErrorKind::UnitViolation:
    case ErrorKind::InconsistentPair:
    case ErrorKind::UnknownKey:
    case ErrorKind::Syntax:
    case ErrorKind::Io:
    case ErrorKind::DegenerateHistory:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, std::string message, std::string key, int line, std::string file)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      key_(std::move(key)),
      line_(line),
      file_(std::move(file)) {}

Error Error::with_file(std::string file) const {
  return Error(kind_, what(), key_, line_, std::move(file));
}

}  // namespace ncv
