#include "cvarkit/error.hpp"

namespace cvarkit {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
        case ErrorCode::UnassignedColumn: return "UnassignedColumn";
        case ErrorCode::InvalidRoles: return "InvalidRoles";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::SingularRegressorMatrix: return "SingularRegressorMatrix";
        case ErrorCode::SingularMomentMatrix: return "SingularMomentMatrix";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::RankOutOfBounds: return "RankOutOfBounds";
        case ErrorCode::GrangerConditionViolated: return "GrangerConditionViolated";
        case ErrorCode::ConstantPolicy: return "ConstantPolicy";
        case ErrorCode::NoTreatedPeriods: return "NoTreatedPeriods";
        case ErrorCode::BootstrapDegenerate: return "BootstrapDegenerate";
        case ErrorCode::DegenerateSample: return "DegenerateSample";
        case ErrorCode::InfiniteVariance: return "InfiniteVariance";
        case ErrorCode::NoPositiveMass: return "NoPositiveMass";
        case ErrorCode::SpecTheoremMismatch: return "SpecTheoremMismatch";
        case ErrorCode::TooFewObservations: return "TooFewObservations";
        case ErrorCode::UnorderedTimestamps: return "UnorderedTimestamps";
    }
    return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SingularRegressorMatrix:
        case ErrorCode::SingularMomentMatrix:
        case ErrorCode::NotPositiveDefinite:
        case ErrorCode::GrangerConditionViolated:
        case ErrorCode::BootstrapDegenerate:
        case ErrorCode::InfiniteVariance:
            return true;
        default:
            return false;
    }
}

void fail(ErrorCode code, const std::string& message) {
    throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

}  // namespace cvarkit
