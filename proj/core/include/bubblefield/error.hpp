#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bubblefield {

/// Every failure the toolkit reports. The CLI maps kinds to exit codes and
/// serializes them as {"error": <name>, "message": ...}.
enum class ErrorKind {
  // configuration / input validation
  TooFewPoints,
  BadDimension,
  DuplicatePoints,
  NonPositiveKappa,
  NonPositiveDistance,
  NonPositiveComponent,
  BadIndex,
  InvalidArgument,
  EmptySet,
  WindowTooLarge,
  OutOfWindow,
  NoSignChange,
  ParseError,
  ValidationError,
  UnknownKey,
  // numerical failures
  QuadratureDiverged,
  SpectrumFailure,
  NoSolutionFound,
  NegativeAlpha,
  AlphaCollapse,
  StepUnderflow,
  IoError,
};

std::string_view error_name(ErrorKind kind) noexcept;

/// True for failures of the numerics rather than of the input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Integration left the admissible regime; carries the exit time.
class IntegrationError : public Error {
 public:
  IntegrationError(ErrorKind kind, double time, const std::string& message)
      : Error(kind, message), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace bubblefield
