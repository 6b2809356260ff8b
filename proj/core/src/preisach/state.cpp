#include "hysop/preisach/state.hpp"

#include <cmath>
#include <sstream>

#include "hysop/error.hpp"

namespace hysop::preisach {

PreisachState PreisachState::negative_saturation(double h_sat) {
    if (!(h_sat > 0.0)) throw ParameterError("h_sat must be positive");
    return PreisachState(h_sat);
}

void PreisachState::apply(double h) {
    if (!(std::abs(h) <= h_sat_)) {
        std::ostringstream msg;
        msg << "field " << h << " A/m outside the modeled range [-" << h_sat_ << ", " << h_sat_
            << "]";
        throw SaturationError(msg.str());
    }
    const double current = extrema_.back();
    if (h == current) return;

    const bool ascending = direction() == Direction::ascending;
    const bool rising = h > current;
    if (rising == ascending)
        extrema_.back() = h;
    else
        extrema_.push_back(h);

    // Wipe out every older (max, min) pair dominated by the new input.
    while (extrema_.size() >= 3) {
        const std::size_t n = extrema_.size();
        const double previous = extrema_[n - 3];
        const bool wiped = rising ? h >= previous : h <= previous;
        if (!wiped) break;
        extrema_.erase(extrema_.begin() + static_cast<std::ptrdiff_t>(n - 3),
                       extrema_.begin() + static_cast<std::ptrdiff_t>(n - 1));
    }
}

std::vector<Corner> PreisachState::staircase() const {
    std::vector<Corner> corners;
    for (std::size_t k = 1; k < extrema_.size(); k += 2)
        corners.push_back({extrema_[k], extrema_[k - 1]});
    return corners;
}

double PreisachState::up_weight(const EverettMap& everett) const {
    double acc = 0.0;
    const std::size_t n = extrema_.size();
    for (std::size_t k = 1; k < n; k += 2) {
        acc += everett.eval_unchecked(extrema_[k], extrema_[k - 1]);
        if (k + 1 < n) acc -= everett.eval_unchecked(extrema_[k], extrema_[k + 1]);
    }
    return acc;
}

PreisachState apply_field(PreisachState state, double h_next) {
    state.apply(h_next);
    return state;
}

double magnetization(const PreisachState& state, const EverettMap& everett, double b_sat) {
    return b_sat * (2.0 * state.up_weight(everett) / everett.total_weight() - 1.0);
}

}  // namespace hysop::preisach
