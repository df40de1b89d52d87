#include "holo/error.hpp"

namespace holo {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NotRecognizedForm: return "NotRecognizedForm";
    case ErrorCode::DegenerateField: return "DegenerateField";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::EssentialNotSupported: return "EssentialNotSupported";
    case ErrorCode::NoRotation: return "NoRotation";
    case ErrorCode::GridEscape: return "GridEscape";
    case ErrorCode::WrongDegree: return "WrongDegree";
    case ErrorCode::DegenerateEquator: return "DegenerateEquator";
    case ErrorCode::SingularPath: return "SingularPath";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::BadStart: return "BadStart";
    case ErrorCode::InconclusiveLimit: return "InconclusiveLimit";
    case ErrorCode::Undetermined: return "Undetermined";
    case ErrorCode::CriticalPointHit: return "CriticalPointHit";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::IOError: return "IOError";
  }
  return "Error";
}

}  // namespace holo
