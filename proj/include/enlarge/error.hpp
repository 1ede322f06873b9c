#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace enlarge {

enum class ErrorCode {
    RefinementBroken,
    BadProbability,
    BadPartition,
    NotAStoppingTime,
    NotARandomTime,
    NotAdapted,
    NotPredictable,
    NotAMartingale,
    NotFMartingale,
    FactorsMissing,
    Unsolvable,
    ConnectorInvalid,
    SupportConditionFailed,
    DimensionMismatch,
    DataInvariantViolated,
    ZeroProbabilityBranch,
    BadGrid,
    JacodDegenerate,
    AzemaDegenerate,
    SchemaError,
};

/// Upper-snake name of the code, e.g. "REFINEMENT_BROKEN".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace enlarge
