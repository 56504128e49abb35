#pragma once

#include <stdexcept>
#include <string>

namespace pinst {

enum class ErrorKind {
  InvalidArgument,
  DegenerateMatrix,
  SingularMatrix,
  PoleAtEndpoint,
  DegenerateCoefficient,
  NoAnalyticBranch,
  NoConvergence,
  DegenerateLine,
  OnDivisor,
  QuadratureFailure,
  BadDeformationParameter,
  ReducibleSystem,
  IndeterminateY,
  PathTooClose,
  SingularArgument,
  SingularityEncountered,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pinst
