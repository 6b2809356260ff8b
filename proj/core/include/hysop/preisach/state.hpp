#pragma once

#include <span>
#include <vector>

#include "hysop/preisach/everett.hpp"

namespace hysop::preisach {

enum class Direction { ascending, descending };

// One turn of the staircase interface: a dominant maximum alpha paired with
// the minimum beta that preceded it.
struct Corner {
    double alpha = 0.0;
    double beta = 0.0;
    bool operator==(const Corner&) const = default;
};

// Memory of the Preisach model stored as the alternating sequence of
// surviving extrema e[0] = -h_sat, e[1] (max), e[2] (min), ..., whose last
// entry is the most recent input. An even-length sequence is ascending.
// The wiping-out rule keeps maxima strictly decreasing and minima strictly
// increasing.
class PreisachState {
public:
    static PreisachState negative_saturation(double h_sat);

    // Throws SaturationError if |h| > h_sat.
    void apply(double h);

    double h_sat() const noexcept { return h_sat_; }
    double last_input() const noexcept { return extrema_.back(); }
    Direction direction() const noexcept {
        return extrema_.size() % 2 == 0 ? Direction::ascending : Direction::descending;
    }
    std::span<const double> extrema() const noexcept { return extrema_; }
    std::vector<Corner> staircase() const;

    // Weight of the switched-up region S+ under the given Everett map.
    double up_weight(const EverettMap& everett) const;

    bool operator==(const PreisachState&) const = default;

private:
    explicit PreisachState(double h_sat) : h_sat_(h_sat), extrema_{-h_sat} {}

    double h_sat_;
    std::vector<double> extrema_;
};

PreisachState apply_field(PreisachState state, double h_next);

// B = b_sat * (2 * S+ / W - 1), so negative saturation gives -b_sat.
double magnetization(const PreisachState& state, const EverettMap& everett, double b_sat);

}  // namespace hysop::preisach
