#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vgrowth {

// Failure categories surfaced by the library. The numeric values are part of
// the C ABI (see vgrowth.h) and must not be reordered.
enum class ErrorCode : int {
    Ok = 0,
    EmptySeries = 1,
    CountViolation = 2,
    DuplicatePeriod = 3,
    UnknownDataset = 4,
    ParseError = 5,
    BoundaryOdds = 6,
    NonPositivePeriod = 7,
    Separation = 8,
    Singular = 9,
    MaxIterations = 10,
    BandwidthTooLarge = 11,
    PeriodMismatch = 12,
    NegativeC = 13,
    NonPositiveR = 14,
    NonPositiveCount = 15,
    InvalidIndex = 16,
    InvalidConfig = 17,
    InvalidArgument = 18,
    WindowOutOfRange = 19,
    IoError = 20,
    BufferTooSmall = 21,
    Internal = 99,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace vgrowth
