#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hysop/nd/tape.hpp"

namespace hysop::nd {

struct GradcheckOptions {
    double step = 1e-6;
    // Relative error |a - f| / max(|a|, |f|, floor).
    double floor = 1e-3;
    // 0 checks every entry; otherwise this many random entries per input.
    std::size_t samples_per_input = 0;
    std::uint64_t seed = 0;
};

struct GradcheckResult {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::size_t worst_input = 0;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

// `f` builds a scalar from leaves bound to `inputs` on a fresh tape.
using ScalarFn = std::function<Var(Tape&, const std::vector<Var>&)>;

// Compares reverse-mode gradients with central differences.
GradcheckResult gradcheck(const ScalarFn& f, const std::vector<Tensor>& inputs,
                          const GradcheckOptions& options = {});

}  // namespace hysop::nd
