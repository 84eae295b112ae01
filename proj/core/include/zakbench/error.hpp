#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zakbench {

// Named failure modes. The string form (to_string) is part of the public
// contract: the CLI prints it and tests match on it.
enum class ErrorCode {
  DimMismatch,
  EmptyFamily,
  SpectrumFail,
  IndexOutOfWindow,
  RemovedIndex,
  WeightVanishesOnGrid,
  InvalidSystem,
  ThetaDomain,
  ThetaTruncation,
  ExcludedIndex,
  SingularNode,
  BoundViolated,
  FamilyMismatch,
  NotMinimal,
  TailNotExact,
  NotReproducingPair,
  NoDependence,
  HeadDependent,
  TailNotComplete,
  InvalidArgument,
  Io,
  Format,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace zakbench
