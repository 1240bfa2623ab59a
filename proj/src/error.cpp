#include "adlab/error.hpp"

namespace adlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SourceOutOfWindow: return "SourceOutOfWindow";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::BranchMatchAmbiguous: return "BranchMatchAmbiguous";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EigenResidualTooLarge: return "EigenResidualTooLarge";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
  }
  return "Unknown";
}

}  // namespace adlab
