#include "bpinv/error.hpp"

namespace bpinv {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::BadGeometry: return "BadGeometry";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::NegativeThreshold: return "NegativeThreshold";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::WrongVariant: return "WrongVariant";
    case ErrorCode::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorCode::BadSupportSize: return "BadSupportSize";
    case ErrorCode::BadDelta: return "BadDelta";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::ZeroSignal: return "ZeroSignal";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonPowerOfTwo: return "NonPowerOfTwo";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bpinv
