#pragma once

#include <stdexcept>
#include <string>

namespace kmpp {

// Error taxonomy mirrors the CLI exit codes:
//   2 parameter, 3 schedule, 4 budget, 5 I/O.

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad sampling inputs (all-zero, negative or NaN weights).
struct SamplingError : ParameterError {
    using ParameterError::ParameterError;
};

// A lemma checker was invoked on a state that does not satisfy its
// conditioning event (no center at the origin site).
struct ConditioningError : ParameterError {
    using ParameterError::ParameterError;
};

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kmpp
