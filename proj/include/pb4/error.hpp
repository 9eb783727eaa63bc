#pragma once

#include <stdexcept>
#include <string>

namespace pb4 {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  NonFinite,
  TooCoarse,
  SupportViolation,
  NotAreaPreserving,
  Unsupported,
};

const char* error_code_name(ErrorCode c);

// Every precondition failure in the library throws this.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

}  // namespace pb4
