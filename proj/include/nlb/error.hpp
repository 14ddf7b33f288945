#pragma once

#include <stdexcept>
#include <string>

namespace nlb {

// Failure classes surfaced by the library. CLI maps anything carrying a
// code to exit status 1; malformed command lines exit 2 before reaching us.
enum class ErrorCode {
    Range,          // numeric argument outside its legal interval
    Weights,        // mixture weights negative or not summing to one
    DomainMismatch, // operands live on different input domains
    Domain,         // input row not covered by the box's domain
    DepthMismatch,  // protocol depth disagrees with the box count
    RejectedInput,  // a wired history drives a box outside its domain
    Arity,          // boolean functions of unequal arity combined
    Length,         // bit strings of unequal length combined
    Samples,        // not enough distinct sample points to interpolate
    Degree,         // polynomial degree above what the solver handles
    Parse,          // unreadable number, polynomial, or file payload
    Completion,     // correlator value depends on the completion row
};

const char* error_code_name(ErrorCode code);

class NlbError : public std::runtime_error {
  public:
    NlbError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw NlbError(code, message);
}

} // namespace nlb
