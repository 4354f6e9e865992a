#include "gpt/errors.hpp"

namespace gpt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::TheoryMismatch: return "TheoryMismatch";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::UnknownSystem: return "UnknownSystem";
    case ErrorKind::BadSelector: return "BadSelector";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::BadArity: return "BadArity";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidTransformation: return "InvalidTransformation";
    case ErrorKind::MarginalMismatch: return "MarginalMismatch";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::BadMatrix: return "BadMatrix";
    case ErrorKind::TooFewProbes: return "TooFewProbes";
    case ErrorKind::ProbeNotPure: return "ProbeNotPure";
    case ErrorKind::OpenCircuit: return "OpenCircuit";
    case ErrorKind::BranchOutOfRange: return "BranchOutOfRange";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::UnknownDemo: return "UnknownDemo";
    case ErrorKind::Internal: return "Internal";
  }
  return "Error";
}

}  // namespace gpt
