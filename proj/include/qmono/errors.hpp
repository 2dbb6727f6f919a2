#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmono {

enum class ErrorCode {
  NotHermitian,
  NotPositive,
  NotNormalized,
  NotPure,
  DimensionMismatch,
  BadRank,
  BadOrder,
  OutOfRange,
  TooManyEntries,
  RankTooLarge,
  OptimizerFailed,
  BadGrid,
  BadEnsembleSize,
  ReconstructionFailed,
  UnsupportedDStar,
  Unsupported,
  BadOverlap,
  BadConfig,
  IoError,
  UnknownInequality,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooManyEntries: return "TooManyEntries";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::OptimizerFailed: return "OptimizerFailed";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::BadEnsembleSize: return "BadEnsembleSize";
    case ErrorCode::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorCode::UnsupportedDStar: return "UnsupportedDStar";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::BadOverlap: return "BadOverlap";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownInequality: return "UnknownInequality";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qmono
