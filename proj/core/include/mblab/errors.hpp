// errors.hpp — exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace mblab {

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Charge |C1|^2 + |C2|^2 deviates from 1 beyond the accepted tolerance.
struct NotNormalized : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AtNorthPole : std::domain_error {
    using std::domain_error::domain_error;
};

struct AtSouthPole : std::domain_error {
    using std::domain_error::domain_error;
};

struct EpsOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive step collapsed; the configuration is pathological.
struct StepSizeUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

struct BranchUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChartConversionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mblab
