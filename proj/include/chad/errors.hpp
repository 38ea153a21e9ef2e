#pragma once

#include <stdexcept>
#include <string>

namespace chad {

enum class Err {
  UnboundTypeVar,
  OpenFunctionType,
  IllKinded,
  UnboundVar,
  TypeMismatch,
  ArityMismatch,
  NonExhaustiveMatch,
  UnknownOp,
  LinearVarMisuse,
  NotLinearType,
  MissingPrimitiveDerivative,
  MismatchedBranch,
  NotADataType,
  ShapeMismatch,
  ComponentCrossed,
  SyntaxError,
  Internal,
};

const char* err_name(Err e);

struct ChadError : std::runtime_error {
  Err kind;
  ChadError(Err k, const std::string& msg)
      : std::runtime_error(std::string(err_name(k)) + ": " + msg), kind(k) {}
};

[[noreturn]] inline void fail(Err k, const std::string& msg) { throw ChadError(k, msg); }

}  // namespace chad
