#include "opshape/error.hpp"

namespace opshape {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidLandmark: return "InvalidLandmark";
    case ErrorKind::InvalidFrame: return "InvalidFrame";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::FocalMean: return "FocalMean";
    case ErrorKind::InvalidLevel: return "InvalidLevel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::BehindCamera: return "BehindCamera";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

}  // namespace opshape
