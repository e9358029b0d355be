#pragma once

#include <stdexcept>
#include <string>

namespace qsb {

// Base for everything thrown on purpose by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration or usage: unknown task family, missing key, mismatched
// registers, unregistered hypothesis.  CLI maps these to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// A caller violated a documented precondition (kappa*m < 1, sum below the
// floor, non-normalized state fed where a normalized one is required, ...).
struct DomainError : Error {
    using Error::Error;
};

// A provable invariant failed at runtime.  This is the "stop the world"
// error: it means the implementation, not the caller, is wrong.  CLI maps
// these to exit code 4.
struct ContractError : Error {
    using Error::Error;
};

// An example source ran dry or a file could not be read/written.
struct ResourceError : Error {
    using Error::Error;
};

// An event whose probability is negligible under the design parameters
// happened anyway (rejection sampling exceeded its attempt ceiling, state
// preparation failed 64 times in a row).
struct StatisticalAnomalyError : Error {
    using Error::Error;
};

// The weak learner returned a hypothesis with weighted error >= 1/2 even
// after polarity flipping; boosting cannot make progress.
struct DegenerateLearnerError : Error {
    using Error::Error;
};

} // namespace qsb
