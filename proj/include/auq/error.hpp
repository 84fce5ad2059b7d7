#pragma once

#include <stdexcept>
#include <string>

namespace auq {

// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  io,           // unreadable or unwritable files
  validation,   // malformed values, mismatched supports, bad configuration
  domain,       // argument outside the mathematical domain of a function
  support,      // KL-style support violation (q_i = 0 where p_i > 0)
  degenerate,   // input carries no information (all-zero counts, no pairs)
  unavailable,  // an optional input required by an estimator is missing
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define AUQ_DEFINE_ERROR(Name, Kind)                                            \
  class Name : public Error {                                                   \
   public:                                                                      \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {}    \
  };

AUQ_DEFINE_ERROR(IoError, io)
AUQ_DEFINE_ERROR(ValidationError, validation)
AUQ_DEFINE_ERROR(DomainError, domain)
AUQ_DEFINE_ERROR(SupportError, support)
AUQ_DEFINE_ERROR(DegenerateInputError, degenerate)
AUQ_DEFINE_ERROR(UnavailableError, unavailable)

#undef AUQ_DEFINE_ERROR

}  // namespace auq
