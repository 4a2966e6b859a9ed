#pragma once

#include <stdexcept>
#include <string>

namespace cvarkit {

// Numeric values are mirrored by cvk_status in cvarkit.h; keep them in sync.
enum class ErrorCode : int {
    InvalidArgument = 1,
    Io = 2,
    MissingColumn = 3,
    NonNumericCell = 4,
    DuplicateTimestamp = 5,
    UnassignedColumn = 6,
    InvalidRoles = 7,
    TooShort = 8,
    SingularRegressorMatrix = 9,
    SingularMomentMatrix = 10,
    NotPositiveDefinite = 11,
    RankOutOfBounds = 12,
    GrangerConditionViolated = 13,
    ConstantPolicy = 14,
    NoTreatedPeriods = 15,
    BootstrapDegenerate = 16,
    DegenerateSample = 17,
    InfiniteVariance = 18,
    NoPositiveMass = 19,
    SpecTheoremMismatch = 20,
    TooFewObservations = 21,
    UnorderedTimestamps = 22,
};

[[nodiscard]] const char* error_code_name(ErrorCode code) noexcept;

// Numerical failures (exit code 3 at the CLI) as opposed to input validation.
[[nodiscard]] bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace cvarkit
