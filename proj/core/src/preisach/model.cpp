#include "hysop/preisach/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hysop/error.hpp"

namespace hysop::preisach {

PreisachModel::PreisachModel(EverettMap everett, double b_sat)
    : everett_(std::move(everett)), b_sat_(b_sat) {
    if (!(b_sat_ > 0.0) || !std::isfinite(b_sat_)) throw ParameterError("b_sat must be positive");
}

double PreisachModel::magnetization(const PreisachState& state) const {
    return preisach::magnetization(state, everett_, b_sat_);
}

std::vector<double> PreisachModel::forward_sequence(std::span<const double> h) const {
    auto state = initial_state();
    return forward_sequence(h, state);
}

std::vector<double> PreisachModel::forward_sequence(std::span<const double> h,
                                                    PreisachState& state) const {
    std::vector<double> b;
    b.reserve(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        try {
            state.apply(h[i]);
        } catch (const SaturationError& e) {
            throw SaturationError("index " + std::to_string(i) + ": " + e.what());
        }
        b.push_back(magnetization(state));
    }
    return b;
}

double PreisachModel::inverse_step(PreisachState& state, double b,
                                   const InverseOptions& options) const {
    if (!std::isfinite(b) || std::abs(b) > reachable_limit(options)) {
        std::ostringstream msg;
        msg << "B = " << b << " T outside the reachable band |B| <= " << reachable_limit(options);
        throw RangeError(msg.str());
    }
    const double hs = h_sat();
    const double lo_target = b - options.tol_b;
    const double hi_target = b + options.tol_b;
    const double width_tol = 1e-12 * hs;
    auto response = [&](double h) { return magnetization(apply_field(state, h)); };

    const double f_min = response(-hs);
    const double f_max = response(hs);
    if (f_max < lo_target || f_min > hi_target) {
        std::ostringstream msg;
        msg << "B = " << b << " T not reachable from the current memory state";
        throw RangeError(msg.str());
    }

    // Smallest h with B(h) >= b - tol.
    double lower = -hs;
    if (f_min < lo_target) {
        double a = -hs;
        double c = hs;
        int iter = 0;
        while (c - a > width_tol) {
            const double m = 0.5 * (a + c);
            if (m <= a || m >= c) break;
            (response(m) >= lo_target ? c : a) = m;
            if (++iter > options.max_iter)
                throw ConvergenceError("bisection did not converge on the lower edge");
        }
        lower = c;
    }

    // Largest h with B(h) <= b + tol.
    double upper = hs;
    if (f_max > hi_target) {
        double a = -hs;
        double c = hs;
        int iter = 0;
        while (c - a > width_tol) {
            const double m = 0.5 * (a + c);
            if (m <= a || m >= c) break;
            (response(m) <= hi_target ? a : c) = m;
            if (++iter > options.max_iter)
                throw ConvergenceError("bisection did not converge on the upper edge");
        }
        upper = a;
    }

    // Inside a switching jump both edges meet with no admissible h between
    // them, so the residual is checked rather than the edge ordering.
    double h = std::clamp(0.5 * (lower + upper), -hs, hs);
    if (std::abs(response(h) - b) > options.tol_b) {
        const double alt = std::abs(response(lower) - b) <= options.tol_b ? lower : upper;
        if (std::abs(response(alt) - b) > options.tol_b) {
            std::ostringstream msg;
            msg << "B = " << b << " T falls inside a switching jump of the model";
            throw RangeError(msg.str());
        }
        h = alt;
    }
    state.apply(h);
    return h;
}

std::vector<double> PreisachModel::inverse_sequence(std::span<const double> b,
                                                    const InverseOptions& options) const {
    auto state = initial_state();
    return inverse_sequence(b, state, options);
}

std::vector<double> PreisachModel::inverse_sequence(std::span<const double> b,
                                                    PreisachState& state,
                                                    const InverseOptions& options) const {
    std::vector<double> h;
    h.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        try {
            h.push_back(inverse_step(state, b[i], options));
        } catch (const RangeError& e) {
            throw RangeError("index " + std::to_string(i) + ": " + e.what());
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("index " + std::to_string(i) + ": " + e.what());
        }
    }
    return h;
}

}  // namespace hysop::preisach
