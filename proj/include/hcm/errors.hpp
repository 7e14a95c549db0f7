#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

enum class ErrorKind {
  Singular,
  NonIntegralBlock,
  RankAmbiguous,
  ShapeMismatch,
  ZeroOperator,
  NotRegular,
  UnknownName,
  NotRepresentable,
  WindowTooSmall,
  NotDirect,
  HeadNotInvertible,
  KernelNotNested,
  UndecidedInput,
  DegenerateSymbol,
  Undecidable,
  PathHitsBoundary,
  NotIsolated,
  HypothesisUndecided,
  UnknownSuite,
  ParseError,
  SignatureMismatch,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hcm
