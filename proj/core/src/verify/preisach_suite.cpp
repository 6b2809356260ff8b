#include <cmath>
#include <numbers>

#include "common.hpp"
#include "hysop/preisach/model.hpp"

namespace hysop::verify {

using namespace detail;
using namespace preisach;

namespace {

PreisachModel gaussian_model() { return PreisachModel(EverettMap(PreisachDensity::gaussian(1000.0)), 1.2); }

PreisachState run(PreisachState s, const std::vector<double>& h) {
    for (double v : h) s.apply(v);
    return s;
}

// A reversal at a followed by an excursion to c inside the previous turning
// point and back to a must leave no trace in the state.
double wiping_out_violations() {
    auto rng = make_rng(99, 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0), frac(0.05, 0.95);
    int bad = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> hist(1 + static_cast<std::size_t>(trial % 17));
        for (auto& v : hist) v = u(rng);
        hist.push_back(u(rng));
        const double a = hist.back();
        const auto start = PreisachState::negative_saturation(1.0);
        const auto reached = run(start, hist);
        const auto ext = reached.extrema();
        const double c = a + (ext[ext.size() - 2] - a) * frac(rng);
        auto loop = hist;
        loop.push_back(c);
        loop.push_back(a);
        if (!(run(start, loop) == reached)) ++bad;
    }
    return bad;
}

// Loops between the same bounds reached from different histories differ by
// a constant offset.
double congruency_gap(const PreisachModel& model) {
    const double lo = -200.0, hi = 400.0;
    auto trace = [&](const std::vector<double>& history) {
        auto s = model.initial_state();
        for (double h : history) s.apply(h);
        s.apply(lo);
        const double b0 = model.magnetization(s);
        std::vector<double> delta;
        for (int k = 1; k <= 40; ++k) {
            s.apply(lo + (hi - lo) * k / 40.0);
            delta.push_back(model.magnetization(s) - b0);
        }
        for (int k = 39; k >= 0; --k) {
            s.apply(lo + (hi - lo) * k / 40.0);
            delta.push_back(model.magnetization(s) - b0);
        }
        return delta;
    };
    const auto a = trace({900.0, -700.0, 500.0});
    const auto b = trace({600.0, -500.0, 450.0});
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double closed_loop_drift(const PreisachModel& model) {
    auto s = model.initial_state();
    s.apply(800.0);
    s.apply(-100.0);
    std::vector<double> visits;
    for (int cycle = 0; cycle < 5; ++cycle) {
        for (double h : {50.0, 150.0, 300.0, 150.0, 0.0, -100.0}) s.apply(h);
        visits.push_back(model.magnetization(s));
    }
    double worst = 0.0;
    for (double v : visits) worst = std::max(worst, std::abs(v - visits[0]));
    return worst;
}

// Inserting extra points inside monotone segments, as a finer time grid
// does, leaves the output at the original points unchanged.
double refinement_gap(const PreisachModel& model) {
    auto rng = make_rng(5, 1);
    std::uniform_real_distribution<double> u(-1000.0, 1000.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> coarse(12), fine;
        std::vector<std::size_t> at;
        for (auto& v : coarse) v = u(rng);
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            if (i > 0)
                for (int k = 1; k < 7; ++k) fine.push_back(coarse[i - 1] + (coarse[i] - coarse[i - 1]) * k / 7.0);
            at.push_back(fine.size());
            fine.push_back(coarse[i]);
        }
        const auto bc = model.forward_sequence(coarse), bf = model.forward_sequence(fine);
        for (std::size_t i = 0; i < coarse.size(); ++i) worst = std::max(worst, std::abs(bc[i] - bf[at[i]]));
    }
    return worst;
}

double relay_grid_gap() {
    auto rng = make_rng(2024, 1);
    std::uniform_real_distribution<double> w(0.1, 1.0), u(-1.0, 1.0);
    std::vector<Relay> relays;
    const int n = 50;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double alpha = -1.0 + 2.0 * (i + 0.5) / n, beta = -1.0 + 2.0 * (j + 0.5) / n;
            if (alpha >= beta) relays.push_back({alpha, beta, w(rng)});
        }
    const double b_sat = 1.2;
    const PreisachModel model(EverettMap(PreisachDensity::relays(1.0, relays)), b_sat);
    std::vector<int> up(relays.size(), 0);
    double total = 0.0;
    for (const auto& r : relays) total += r.weight;
    auto state = model.initial_state();
    double worst = 0.0;
    for (int step = 0; step < 200; ++step) {
        const double h = u(rng);
        state.apply(h);
        double acc = 0.0;
        for (std::size_t i = 0; i < relays.size(); ++i) {
            if (h >= relays[i].alpha) up[i] = 1;
            if (h <= relays[i].beta) up[i] = 0;
            acc += relays[i].weight * (up[i] ? 1.0 : -1.0);
        }
        worst = std::max(worst, std::abs(model.magnetization(state) - b_sat * acc / total));
    }
    return worst;
}

// forward(inverse(b)) against b for FORC-like and loop-like targets.
double inverse_gap(const PreisachModel& model) {
    double worst = 0.0;
    const std::size_t T = 198;
    for (double amp : {0.3, 0.9, 1.15}) {
        std::vector<double> b(T);
        for (std::size_t j = 0; j < T; ++j)
            b[j] = amp * std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(T - 1));
        const auto back = model.forward_sequence(model.inverse_sequence(b));
        for (std::size_t j = 0; j < T; ++j) worst = std::max(worst, std::abs(back[j] - b[j]));
    }
    std::vector<double> loop(T);
    for (std::size_t j = 0; j < T; ++j) {
        const double t = 3.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(T - 1);
        loop[j] = 0.5 * std::cos(t) + 0.3 * std::sin(t);
    }
    const auto back = model.forward_sequence(model.inverse_sequence(loop));
    for (std::size_t j = 0; j < T; ++j) worst = std::max(worst, std::abs(back[j] - loop[j]));
    return worst;
}

}  // namespace

SuiteResult preisach_suite() {
    Stopwatch clock;
    SuiteResult out;
    out.name = "preisach";
    const auto model = gaussian_model();
    out.checks.push_back(at_most("wiping-out violations (500 random histories)", wiping_out_violations(), 0));
    out.checks.push_back(below("congruency of minor loops", congruency_gap(model), 1e-12));
    out.checks.push_back(at_most("closed minor loop drift over 5 cycles", closed_loop_drift(model), 0));
    out.checks.push_back(at_most("monotone refinement changes output", refinement_gap(model), 0));
    out.checks.push_back(below("Everett vs 50x50 relay grid, 200 steps", relay_grid_gap(), 1e-10));
    out.checks.push_back(below("inverse round trip", inverse_gap(model), 1e-8));
    out.seconds = clock.seconds();
    return out;
}

}  // namespace hysop::verify
