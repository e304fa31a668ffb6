#pragma once
// Named experiments: each one runs its module pipeline on the configured
// process, evaluates its documented pass conditions, and writes one JSON
// report plus fixed-schema CSV tables through the report module.

#include <string>

#include "fluctlab/config.hpp"

namespace fluctlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAssert = 2;
inline constexpr int kExitNoConverge = 3;

struct RunOutcome {
    int exit_code = kExitPass;
    bool pass = false;
    std::string report_path;
    std::string summary;  // one console line
};

// experiment name comes from [experiment] name, one of {sinai-check,
// arcsine-test, exponent-consistency, amicales-check, tail-asymptote,
// da-check, regvar-fit, rw-oracle}. The config must already carry any CLI
// overrides. workers only changes the execution schedule of the Monte Carlo
// block decomposition, never the merged numbers, so reports are byte
// identical across worker counts
RunOutcome run_experiment(const Config& resolved, int workers);

}  // namespace fluctlab
