#include "zakbench/error.hpp"

namespace zakbench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::SpectrumFail: return "SpectrumFail";
    case ErrorCode::IndexOutOfWindow: return "IndexOutOfWindow";
    case ErrorCode::RemovedIndex: return "RemovedIndex";
    case ErrorCode::WeightVanishesOnGrid: return "WeightVanishesOnGrid";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::ThetaDomain: return "ThetaDomain";
    case ErrorCode::ThetaTruncation: return "ThetaTruncation";
    case ErrorCode::ExcludedIndex: return "ExcludedIndex";
    case ErrorCode::SingularNode: return "SingularNode";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::TailNotExact: return "TailNotExact";
    case ErrorCode::NotReproducingPair: return "NotReproducingPair";
    case ErrorCode::NoDependence: return "NoDependence";
    case ErrorCode::HeadDependent: return "HeadDependent";
    case ErrorCode::TailNotComplete: return "TailNotComplete";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Format: return "Format";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace zakbench
