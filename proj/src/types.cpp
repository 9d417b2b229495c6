#include "airyspec/types.hpp"

namespace airyspec {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::AccuracyLoss: return "AccuracyLoss";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::OutsideBall: return "OutsideBall";
    case ErrorCode::JordanBlockSuspected: return "JordanBlockSuspected";
    case ErrorCode::TailUncertified: return "TailUncertified";
    case ErrorCode::AlphaBracketFailure: return "AlphaBracketFailure";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::MatchingAmbiguous: return "MatchingAmbiguous";
  }
  return "Unknown";
}

}  // namespace airyspec
