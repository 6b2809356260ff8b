#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hysop/preisach/everett.hpp"
#include "hysop/preisach/state.hpp"

namespace hysop::preisach {

struct InverseOptions {
    double range_margin = 1e-6;  // |b| must stay below b_sat * (1 - margin)
    double tol_b = 1e-10;        // acceptance band around the target, tesla
    int max_iter = 200;          // per bisection edge
};

// Scalar Preisach hysteresis operator H -> B with a fixed Everett map.
// forward_sequence takes no time grid: the output depends on the ordered
// input values only.
class PreisachModel {
public:
    static constexpr double default_b_sat = 1.2;

    explicit PreisachModel(EverettMap everett, double b_sat = default_b_sat);

    double h_sat() const noexcept { return everett_.h_sat(); }
    double b_sat() const noexcept { return b_sat_; }
    const EverettMap& everett() const noexcept { return everett_; }

    PreisachState initial_state() const { return PreisachState::negative_saturation(h_sat()); }
    double magnetization(const PreisachState& state) const;

    // Per-step apply_field + magnetization. Throws SaturationError naming
    // the offending index.
    std::vector<double> forward_sequence(std::span<const double> h) const;
    std::vector<double> forward_sequence(std::span<const double> h, PreisachState& state) const;

    // Recovers the H sequence that drives the model through the given B
    // values. Each step bisects the single-step map h -> B, which is
    // monotone for a fixed memory, for both edges of the admissible set
    // {h : |B(h) - b| <= tol_b} and returns its midpoint; the state is then
    // committed. Throws RangeError or ConvergenceError with the index.
    std::vector<double> inverse_sequence(std::span<const double> b,
                                         const InverseOptions& options = {}) const;
    std::vector<double> inverse_sequence(std::span<const double> b, PreisachState& state,
                                         const InverseOptions& options = {}) const;

    // Single inverse step against an explicit state (state is updated).
    double inverse_step(PreisachState& state, double b, const InverseOptions& options = {}) const;

    // Largest |b| accepted by inverse_sequence.
    double reachable_limit(const InverseOptions& options = {}) const {
        return b_sat_ * (1.0 - options.range_margin);
    }

private:
    EverettMap everett_;
    double b_sat_;
};

}  // namespace hysop::preisach
