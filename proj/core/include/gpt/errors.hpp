#ifndef GPT_ERRORS_HPP
#define GPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gpt {

enum class ErrorKind {
  TypeMismatch,
  TheoryMismatch,
  EmptyList,
  UnknownSystem,
  BadSelector,
  BadShape,
  UnknownName,
  BadParams,
  BadArity,
  InvalidState,
  InvalidTransformation,
  MarginalMismatch,
  NotPure,
  NotTracePreserving,
  BadMatrix,
  TooFewProbes,
  ProbeNotPure,
  OpenCircuit,
  BranchOutOfRange,
  CycleDetected,
  UnknownDemo,
  Internal,
};

const char* to_string(ErrorKind kind);

/// Every library failure is reported through this type; the kind is part of
/// the contract, the message is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace gpt

#endif
