#pragma once

#include <stdexcept>
#include <string>

namespace bpinv {

enum class ErrorCode {
  RankDeficient,
  NonFinite,
  DimensionMismatch,
  BadLength,
  BadGeometry,
  ZeroColumn,
  NonpositiveRadius,
  NegativeThreshold,
  SingularSystem,
  WrongVariant,
  NonFiniteIterate,
  BadSupportSize,
  BadDelta,
  InsufficientData,
  BadK,
  ZeroSignal,
  UnsupportedFormat,
  NonSquare,
  NonPowerOfTwo,
  ConfigError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bpinv
