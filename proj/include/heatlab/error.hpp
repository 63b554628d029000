#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatlab {

enum class ErrorKind {
    DisconnectedGraph,
    NonPositiveWeight,
    ConflictingWeight,
    SelfLoopDisabled,
    InvalidVertex,
    EmptyEdgeList,
    RadiusOrder,
    SizeTooSmall,
    BadParameter,
    BadWeightSequence,
    HorizonExceeded,
    SourceOutsideSet,
    AbsorbingSet,
    EmptySet,
    WholeGraph,
    SetsIntersect,
    NoSeparation,
    BeyondProfile,
    BudgetTooLarge,
    BadConstants,
    UnknownPreset,
    SolverFailure,
    Format,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace heatlab
