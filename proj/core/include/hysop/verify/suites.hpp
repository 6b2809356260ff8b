#pragma once

#include <string>
#include <vector>

namespace hysop::verify {

// One measured quantity against its limit. `pass` is value < limit for
// error bounds and value <= limit for violation counts.
struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct SuiteResult {
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const;
    // First failing check, or the one closest to its limit.
    const Check& worst() const;
};

// Central finite differences against the tape for every differentiable op
// (relative error < 1e-5) and for each architecture at its default size on
// 198-sample curves, 5 random parameters each (< 1e-4).
SuiteResult gradient_suite();

// rfft/irfft round trip and naive-DFT agreement at length 198, db6
// round trip at 4 levels.
SuiteResult transform_suite();

// Wiping-out, congruency, closed minor loops, refinement invariance,
// Everett against an explicit relay grid and the inverse round trip.
SuiteResult preisach_suite();

}  // namespace hysop::verify
