#pragma once

#include <stdexcept>
#include <string>

namespace adjoint {

enum class ErrorKind {
  Dimension,     // vector/matrix shapes disagree
  Domain,        // input outside the operation's domain
  Parse,         // malformed instance or argument
  Precondition,  // a mathematical hypothesis of the operation fails
  Limit,         // configured size limit exceeded
  Unbounded,     // an LP that must be bounded is not
  Check,         // a verification found a counterexample
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Limit: return "limit";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::Check: return "check";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string stage = {})
      : std::runtime_error(what), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const { return Error(kind_, what(), std::move(stage)); }

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace adjoint
