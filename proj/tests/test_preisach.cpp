#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hysop/error.hpp"
#include "hysop/preisach/model.hpp"

using namespace hysop;
using namespace hysop::preisach;

namespace {

PreisachModel default_model() {
    return PreisachModel(EverettMap(PreisachDensity::gaussian(1000.0)), 1.2);
}

PreisachState run(const PreisachState& start, const std::vector<double>& h) {
    auto s = start;
    for (double v : h) s.apply(v);
    return s;
}

// Brute-force hysteron collection: every relay keeps its own +/-1 state.
struct RelayBank {
    std::vector<Relay> relays;
    std::vector<int> up;
    double total = 0.0;

    explicit RelayBank(std::vector<Relay> r) : relays(std::move(r)), up(relays.size(), 0) {
        for (const auto& x : relays) total += x.weight;
    }
    double apply(double h, double b_sat) {
        double acc = 0.0;
        for (std::size_t i = 0; i < relays.size(); ++i) {
            if (h >= relays[i].alpha) up[i] = 1;
            if (h <= relays[i].beta) up[i] = 0;
            acc += relays[i].weight * (up[i] ? 1.0 : -1.0);
        }
        return b_sat * acc / total;
    }
};

}  // namespace

TEST_SUITE("everett") {
    TEST_CASE("uniform unit density integrates (alpha - beta)^2 / 2") {
        EverettMap e(PreisachDensity::uniform(1.0, 1.0));
        CHECK(e(1.0, -1.0) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(e(0.5, -0.25) == doctest::Approx(0.28125).epsilon(1e-15));
        CHECK(e.total_weight() == doctest::Approx(2.0));
    }

    TEST_CASE("degenerate triangle is zero for every kind") {
        const std::vector<EverettMap> maps = {
            EverettMap(PreisachDensity::uniform(1.0)),
            EverettMap(PreisachDensity::gaussian(1000.0)),
            EverettMap(PreisachDensity::relays(1.0, {{0.5, -0.5, 1.0}, {0.2, 0.2, 0.5}}))};
        for (const auto& e : maps) {
            const double hs = e.h_sat();
            for (double x : {-hs, -0.3 * hs, 0.0, 0.2 * hs, 0.7 * hs, hs}) CHECK(e(x, x) == 0.0);
        }
    }

    TEST_CASE("gaussian quadrature refinement: n_grid 400 vs 800") {
        EverettMap coarse(PreisachDensity::gaussian(1000.0), 400);
        EverettMap fine(PreisachDensity::gaussian(1000.0), 800);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1000.0, 1000.0);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            double a = u(rng);
            double b = u(rng);
            if (a < b) std::swap(a, b);
            worst = std::max(worst, std::abs(coarse(a, b) - fine(a, b)));
        }
        CHECK(worst < 1e-6);
    }

    TEST_CASE("gaussian map: total weight, monotonicity, nonnegativity") {
        EverettMap e(PreisachDensity::gaussian(1000.0));
        CHECK(e(1000.0, -1000.0) == e.total_weight());
        CHECK(e.total_weight() == doctest::Approx(1.0).epsilon(1e-14));
        const int n = 81;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double a = -1000.0 + 2000.0 * i / (n - 1);
                const double b = -1000.0 + 2000.0 * j / (n - 1);
                const double v = e(a, b);
                CHECK(v >= 0.0);
                if (i + 1 < n) CHECK(e(a + 2000.0 / (n - 1), b) >= v - 1e-13);
                if (j > 0) CHECK(e(a, b - 2000.0 / (n - 1)) >= v - 1e-13);
            }
        }
    }

    TEST_CASE("domain errors") {
        EverettMap e(PreisachDensity::uniform(1.0));
        CHECK_THROWS_AS(e(-0.5, 0.5), DomainError);
        CHECK_THROWS_AS(e(1.5, 0.0), DomainError);
        CHECK_THROWS_AS(e(0.0, -1.01), DomainError);
    }

    TEST_CASE("density construction rejects invalid relays") {
        CHECK_THROWS_AS(PreisachDensity::relays(1.0, {{-0.5, 0.5, 1.0}}), ParameterError);
        CHECK_THROWS_AS(PreisachDensity::relays(1.0, {{1.5, 0.5, 1.0}}), ParameterError);
        CHECK_THROWS_AS(PreisachDensity::relays(1.0, {{0.5, 0.0, -1.0}}), ParameterError);
        CHECK_THROWS_AS(PreisachDensity::uniform(-1.0), ParameterError);
    }
}

TEST_SUITE("state") {
    TEST_CASE("return-point memory: 0 -> 0.8 -> -0.3 -> 0.8") {
        const auto start = PreisachState::negative_saturation(1.0);
        const auto first_visit = run(start, {0.0, 0.8});
        const auto after = run(start, {0.0, 0.8, -0.3, 0.8});
        CHECK(after == first_visit);
    }

    TEST_CASE("applying the same field twice is idempotent") {
        auto s = run(PreisachState::negative_saturation(1.0), {0.3, -0.2, 0.1});
        const auto once = apply_field(s, 0.05);
        CHECK(apply_field(once, 0.05) == once);
    }

    TEST_CASE("monotone ramp collapses the staircase to one corner") {
        auto s = run(PreisachState::negative_saturation(1.0), {0.5, -0.6, 0.2, -0.1});
        CHECK(s.staircase().size() >= 2);
        for (int k = 0; k <= 200; ++k) s.apply(-1.0 + 2.0 * k / 200.0);
        const auto corners = s.staircase();
        REQUIRE(corners.size() == 1);
        CHECK(corners[0] == Corner{1.0, -1.0});
        CHECK(s.direction() == Direction::ascending);
    }

    TEST_CASE("staircase corners stay strictly nested") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto s = PreisachState::negative_saturation(1.0);
        for (int step = 0; step < 500; ++step) {
            s.apply(u(rng));
            const auto c = s.staircase();
            for (std::size_t k = 1; k < c.size(); ++k) {
                CHECK(c[k].alpha < c[k - 1].alpha);
                CHECK(c[k].beta > c[k - 1].beta);
            }
            for (const auto& corner : c) CHECK(corner.alpha >= corner.beta);
        }
    }

    TEST_CASE("saturation error outside the modeled range") {
        auto s = PreisachState::negative_saturation(1.0);
        CHECK_THROWS_AS(s.apply(1.0 + 1e-9), SaturationError);
        CHECK_THROWS_AS(s.apply(-2.0), SaturationError);
        CHECK_NOTHROW(s.apply(1.0));
    }

    TEST_CASE("wiping-out property on random histories") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> hist(1 + trial % 17);
            for (auto& v : hist) v = u(rng);
            const double a = u(rng);
            auto base = hist;
            base.push_back(a);
            // excursion that reverses at a and stays inside the previous turning point
            const auto reached = run(PreisachState::negative_saturation(1.0), base);
            const auto ext = reached.extrema();
            const double prev = ext[ext.size() - 2];
            const double c = a + (prev - a) * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
            auto loop = base;
            loop.push_back(c);
            loop.push_back(a);
            const auto start = PreisachState::negative_saturation(1.0);
            CHECK(run(start, loop) == run(start, base));
        }
    }
}

TEST_SUITE("magnetization") {
    TEST_CASE("negative saturation reads -B_sat") {
        const auto model = default_model();
        CHECK(model.magnetization(model.initial_state()) == doctest::Approx(-1.2).epsilon(1e-15));
    }

    TEST_CASE("Everett sums match a 50x50 brute-force relay grid") {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> w(0.1, 1.0);
        std::vector<Relay> relays;
        const int n = 50;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double alpha = -1.0 + 2.0 * (i + 0.5) / n;
                const double beta = -1.0 + 2.0 * (j + 0.5) / n;
                if (alpha >= beta) relays.push_back({alpha, beta, w(rng)});
            }
        PreisachModel model(EverettMap(PreisachDensity::relays(1.0, relays)), 1.2);
        RelayBank bank(relays);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto state = model.initial_state();
        double worst = 0.0;
        for (int step = 0; step < 200; ++step) {
            const double h = u(rng);
            state.apply(h);
            worst = std::max(worst, std::abs(model.magnetization(state) - bank.apply(h, 1.2)));
        }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("alternating decaying sweep demagnetizes") {
        const auto model = default_model();
        auto s = model.initial_state();
        const int steps = 1000;
        for (int k = 0; k <= steps; ++k) {
            const double amp = 1000.0 * (1.0 - static_cast<double>(k) / steps);
            s.apply((k % 2 == 0 ? 1.0 : -1.0) * amp);
        }
        CHECK(std::abs(model.magnetization(s)) < 1e-3 * model.b_sat());
    }

    TEST_CASE("congruent minor loops from different histories") {
        const auto model = default_model();
        const double lo = -200.0;
        const double hi = 400.0;
        auto trace = [&](std::vector<double> history) {
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
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }

    TEST_CASE("closed minor loops repeat exactly") {
        const auto model = default_model();
        auto s = model.initial_state();
        s.apply(800.0);
        s.apply(-100.0);
        std::vector<double> visits;
        for (int cycle = 0; cycle < 5; ++cycle) {
            for (double h : {50.0, 150.0, 300.0, 150.0, 0.0, -100.0}) s.apply(h);
            visits.push_back(model.magnetization(s));
        }
        for (std::size_t i = 1; i < visits.size(); ++i) CHECK(visits[i] == visits[0]);
    }
}

TEST_SUITE("sequences") {
    TEST_CASE("single relay hand simulation") {
        PreisachModel model(EverettMap(PreisachDensity::relays(1.0, {{0.5, -0.5, 1.0}})), 1.0);
        const std::vector<double> h = {0.0, 1.0, 0.0, -1.0, 0.0};
        const auto b = model.forward_sequence(h);
        CHECK(b == std::vector<double>{-1.0, 1.0, 1.0, -1.0, -1.0});
    }

    TEST_CASE("all -h_sat input stays at -B_sat") {
        const auto model = default_model();
        const std::vector<double> h(25, -1000.0);
        for (double b : model.forward_sequence(h)) CHECK(b == doctest::Approx(-1.2).epsilon(1e-15));
    }

    TEST_CASE("refining monotone segments leaves the output unchanged") {
        const auto model = default_model();
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1000.0, 1000.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> coarse(12);
            for (auto& v : coarse) v = u(rng);
            std::vector<double> fine;
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                if (i > 0) {
                    for (int k = 1; k < 7; ++k)
                        fine.push_back(coarse[i - 1] + (coarse[i] - coarse[i - 1]) * k / 7.0);
                }
                fine.push_back(coarse[i]);
            }
            CHECK(model.forward_sequence(coarse).back() == model.forward_sequence(fine).back());
        }
    }

    TEST_CASE("saturation error carries the offending index") {
        const auto model = default_model();
        const std::vector<double> h = {0.0, 500.0, 1200.0};
        try {
            model.forward_sequence(h);
            FAIL("expected SaturationError");
        } catch (const SaturationError& e) {
            CHECK(std::string(e.what()).find("index 2") != std::string::npos);
        }
    }

    TEST_CASE("inverse round trip on a half-sine") {
        const auto model = default_model();
        std::vector<double> h;
        for (int j = 0; j < 198; ++j) h.push_back(-150.0 + 700.0 * std::sin(3.14159265358979 * j / 197.0));
        const auto b = model.forward_sequence(h);
        const auto h_rec = model.inverse_sequence(b);
        const auto b_again = model.forward_sequence(h_rec);
        for (std::size_t j = 0; j < b.size(); ++j) CHECK(std::abs(b_again[j] - b[j]) < 1e-8);
    }

    TEST_CASE("inverse rejects targets beyond the reachable band") {
        const auto model = default_model();
        const std::vector<double> b(4, -1.2 * 0.9999999);
        CHECK_THROWS_AS(model.inverse_sequence(b), RangeError);
        const std::vector<double> ok(4, -1.2 * 0.99);
        CHECK_NOTHROW(model.inverse_sequence(ok));
    }

    TEST_CASE("dead band: inverse returns the midpoint of the admissible interval") {
        // Two relays give a degaussed state (B = 0) for every h in (-0.5, 0.5).
        PreisachModel model(
            EverettMap(PreisachDensity::relays(1.0, {{0.5, 0.3, 1.0}, {-0.3, -0.5, 1.0}})), 1.0);
        auto state = model.initial_state();
        state.apply(0.0);
        REQUIRE(model.magnetization(state) == 0.0);
        auto probe = state;
        const auto h = model.inverse_sequence(std::vector<double>{0.0}, probe);
        CHECK(std::abs(h[0]) < 1e-9);
        for (double x : {-0.45, -0.1, 0.2, 0.49})
            CHECK(model.magnetization(apply_field(state, x)) == 0.0);
    }

    TEST_CASE("inverse reports a jump it cannot land in") {
        PreisachModel model(EverettMap(PreisachDensity::relays(1.0, {{0.5, -0.5, 1.0}})), 1.0);
        CHECK_THROWS_AS(model.inverse_sequence(std::vector<double>{0.0}), RangeError);
    }
}
