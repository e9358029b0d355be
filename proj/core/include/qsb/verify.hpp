#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsb {

// Self-contained invariant checks, runnable on demand.  Each check executes
// fresh desk-scale runs and holds them to the guarantees the algorithms are
// built around; `detail` carries the measured numbers either way so a
// failure is diagnosable from the one line.
struct VerifyResult {
    std::string check;
    bool passed = false;
    std::string detail;
};

// Suites: smoothness, rounds, error-envelope, state-prep, counting,
// equivalence, or all.  Unknown names throw ConfigError.
std::vector<VerifyResult> run_verify(const std::string& suite, std::uint64_t seed);

} // namespace qsb
