#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teach {

enum class ErrorCode {
    ParseError,
    InvalidRational,
    InvalidLabel,
    MissingFeatureValue,
    DuplicateObjectId,
    LatticeChainViolation,
    UnknownFeatureId,
    UnknownObject,
    UnknownFeature,
    FeatureSetNotInLattice,
    DimensionMismatch,
    NotSeparable,
    EmptyClass,
    BudgetExceeded,
    IllegalAction,
    Stuck,
    StepLimitExceeded,
    InvalidParams,
    ConstructionFailed,
};

std::string_view to_string(ErrorCode code);

class TeachError : public std::runtime_error {
public:
    TeachError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace teach
