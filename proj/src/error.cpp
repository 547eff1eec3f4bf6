#include "vgrowth/error.hpp"

namespace vgrowth {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::CountViolation: return "CountViolation";
        case ErrorCode::DuplicatePeriod: return "DuplicatePeriod";
        case ErrorCode::UnknownDataset: return "UnknownDataset";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::BoundaryOdds: return "BoundaryOdds";
        case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
        case ErrorCode::Separation: return "Separation";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::MaxIterations: return "MaxIterations";
        case ErrorCode::BandwidthTooLarge: return "BandwidthTooLarge";
        case ErrorCode::PeriodMismatch: return "PeriodMismatch";
        case ErrorCode::NegativeC: return "NegativeC";
        case ErrorCode::NonPositiveR: return "NonPositiveR";
        case ErrorCode::NonPositiveCount: return "NonPositiveCount";
        case ErrorCode::InvalidIndex: return "InvalidIndex";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BufferTooSmall: return "BufferTooSmall";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace vgrowth
