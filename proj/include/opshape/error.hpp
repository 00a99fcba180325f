#pragma once

#include <stdexcept>
#include <string>

namespace opshape {

enum class ErrorKind {
  InvalidLandmark,
  InvalidFrame,
  DegenerateFrame,
  DegeneratePoint,
  EmptySample,
  FocalMean,
  InvalidLevel,
  InvalidArgument,
  ParseError,
  SchemaError,
  BehindCamera,
  GenerationFailed,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix that what() carries.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace opshape
