#include <algorithm>

#include "hysop/verify/suites.hpp"

namespace hysop::verify {

bool SuiteResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check& SuiteResult::worst() const {
    static const Check none{"no checks", 0.0, 0.0, false};
    if (checks.empty()) return none;
    for (const auto& c : checks)
        if (!c.pass) return c;
    auto ratio = [](const Check& c) { return c.limit > 0.0 ? c.value / c.limit : 0.0; };
    return *std::max_element(checks.begin(), checks.end(),
                             [&](const Check& a, const Check& b) { return ratio(a) < ratio(b); });
}

}  // namespace hysop::verify
