#include "heatlab/error.hpp"

namespace heatlab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::ConflictingWeight: return "ConflictingWeight";
    case ErrorKind::SelfLoopDisabled: return "SelfLoopDisabled";
    case ErrorKind::InvalidVertex: return "InvalidVertex";
    case ErrorKind::EmptyEdgeList: return "EmptyEdgeList";
    case ErrorKind::RadiusOrder: return "RadiusOrder";
    case ErrorKind::SizeTooSmall: return "SizeTooSmall";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::BadWeightSequence: return "BadWeightSequence";
    case ErrorKind::HorizonExceeded: return "HorizonExceeded";
    case ErrorKind::SourceOutsideSet: return "SourceOutsideSet";
    case ErrorKind::AbsorbingSet: return "AbsorbingSet";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::WholeGraph: return "WholeGraph";
    case ErrorKind::SetsIntersect: return "SetsIntersect";
    case ErrorKind::NoSeparation: return "NoSeparation";
    case ErrorKind::BeyondProfile: return "BeyondProfile";
    case ErrorKind::BudgetTooLarge: return "BudgetTooLarge";
    case ErrorKind::BadConstants: return "BadConstants";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::Format: return "Format";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

} // namespace heatlab
