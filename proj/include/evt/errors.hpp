#pragma once

#include <stdexcept>
#include <string>

namespace evt {

// Input outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration (unknown model name, collapsed k-schedule, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tied or non-increasing order statistics; the spacing-ratio estimator
// is undefined on such input.
struct DegenerateSpacing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// log-GW estimator requires a positive threshold order statistic.
struct NonpositiveThreshold : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure (non-bracketable root, no convergence).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace evt
