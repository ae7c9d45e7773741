#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dosgk {

enum class ErrorCode {
  // graph-core
  AsymmetricInput,
  NegativeWeight,
  DimensionMismatch,
  // dataset-io
  MissingFile,
  MalformedLine,
  IndicatorOutOfRange,
  EmptyResult,
  VersionMismatch,
  ChecksumMismatch,
  IoError,
  // kpm-engine / features
  InvalidConfig,
  ConfigMismatch,
  DegreeTooLarge,
  RangeOutOfBounds,
  // kernels
  LengthMismatch,
  MomentCountMismatch,
  ShapeMismatch,
  // classify
  TooFewInstances,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dosgk
