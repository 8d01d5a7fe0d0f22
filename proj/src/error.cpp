#include "setproof/error.hpp"

namespace setproof {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::CategoryMismatch: return "CategoryMismatch";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::RuleNotApplicable: return "RuleNotApplicable";
    case ErrorCode::NothingToUndo: return "NothingToUndo";
    case ErrorCode::NothingToRedo: return "NothingToRedo";
    case ErrorCode::InvalidTheorem: return "InvalidTheorem";
    case ErrorCode::UnknownGoal: return "UnknownGoal";
    case ErrorCode::UnknownGiven: return "UnknownGiven";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::FreshnessViolation: return "FreshnessViolation";
    case ErrorCode::ArgumentMissing: return "ArgumentMissing";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::ReplayFailure: return "ReplayFailure";
  }
  return "Unknown";
}

}  // namespace setproof
