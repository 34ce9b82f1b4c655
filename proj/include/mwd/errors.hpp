#pragma once

#include <stdexcept>
#include <string>

namespace mwd {

// Exceptions carry a stable machine-parsable code (see README for the full
// list) plus a human message. The CLI maps the category to its exit code:
// parameter errors exit 2, verification failures exit 1, internal breaches 3.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error("[" + code + "] " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Invalid inputs: bad CLI flags, violated operation preconditions.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A checked claim did not hold at run time (reported, not a bug per se).
class VerificationError : public Error {
 public:
  using Error::Error;
};

// A guaranteed internal invariant broke; indicates an implementation bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] inline void throw_param(const std::string& code, const std::string& msg) {
  throw ParameterError(code, msg);
}

[[noreturn]] inline void throw_internal(const std::string& code, const std::string& msg) {
  throw InternalError(code, msg);
}

}  // namespace mwd
