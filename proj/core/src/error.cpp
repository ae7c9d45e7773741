#include "dosgk/error.hpp"

namespace dosgk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::IndicatorOutOfRange: return "IndicatorOutOfRange";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MomentCountMismatch: return "MomentCountMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace dosgk
