#ifndef DEDUPVAULT_ERRORS_HPP
#define DEDUPVAULT_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dedupvault {

enum class ErrorCode : std::uint16_t {
  None = 0,
  // crypto / codec
  InvalidPoint = 1,
  AuthFailure = 2,
  MalformedFrame = 3,
  UnknownVersion = 4,
  UnknownTag = 5,
  // possession
  FileTooSmall = 10,
  NonceMismatch = 11,
  PossessionFailed = 12,
  // store
  UnknownFile = 20,
  DuplicateFileId = 21,
  AlreadyHolder = 22,
  NotAHolder = 23,
  // protocol
  SignatureInvalid = 30,
  DuplicateDetected = 31,
  AccessDenied = 32,
  ConsistencyFailure = 33,
  NotOwner = 34,
  SuccessorNotHolder = 35,
  NotEnrolled = 36,
  EnrollMismatch = 37,
  FlowInProgress = 38,
  NoSession = 39,
  Timeout = 40,
  Internal = 50,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  explicit Error(ErrorCode code, const std::string& what = "")
      : std::runtime_error(what.empty() ? error_name(code) : what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dedupvault

#endif
