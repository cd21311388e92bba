#include "dedupvault/errors.hpp"

namespace dedupvault {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::None: return "None";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::AuthFailure: return "AuthFailure";
    case ErrorCode::MalformedFrame: return "MalformedFrame";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::FileTooSmall: return "FileTooSmall";
    case ErrorCode::NonceMismatch: return "NonceMismatch";
    case ErrorCode::PossessionFailed: return "PossessionFailed";
    case ErrorCode::UnknownFile: return "UnknownFile";
    case ErrorCode::DuplicateFileId: return "DuplicateFileId";
    case ErrorCode::AlreadyHolder: return "AlreadyHolder";
    case ErrorCode::NotAHolder: return "NotAHolder";
    case ErrorCode::SignatureInvalid: return "SignatureInvalid";
    case ErrorCode::DuplicateDetected: return "DuplicateDetected";
    case ErrorCode::AccessDenied: return "AccessDenied";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorCode::NotOwner: return "NotOwner";
    case ErrorCode::SuccessorNotHolder: return "SuccessorNotHolder";
    case ErrorCode::NotEnrolled: return "NotEnrolled";
    case ErrorCode::EnrollMismatch: return "EnrollMismatch";
    case ErrorCode::FlowInProgress: return "FlowInProgress";
    case ErrorCode::NoSession: return "NoSession";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace dedupvault
