#pragma once

#include <stdexcept>
#include <string>

namespace lgtrace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LGTRACE_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  };

LGTRACE_DEFINE_ERROR(NotZeroDimensional)
LGTRACE_DEFINE_ERROR(NotInIdeal)
LGTRACE_DEFINE_ERROR(NotStabilized)
LGTRACE_DEFINE_ERROR(InvalidSupport)
LGTRACE_DEFINE_ERROR(PreconditionFailed)
LGTRACE_DEFINE_ERROR(NotAFactorization)
LGTRACE_DEFINE_ERROR(MismatchedPotential)
LGTRACE_DEFINE_ERROR(BackendUnavailable)
LGTRACE_DEFINE_ERROR(NotACocycle)
LGTRACE_DEFINE_ERROR(NotInvolutive)
LGTRACE_DEFINE_ERROR(InvalidArgument)

#undef LGTRACE_DEFINE_ERROR

/// Malformed input text, with the 1-based position of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& what)
      : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed input that does not describe a valid problem.
class SemanticError : public Error {
 public:
  explicit SemanticError(const std::string& what) : Error("SemanticError", what) {}
};

}  // namespace lgtrace
