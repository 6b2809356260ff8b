#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "hysop/data/dataset.hpp"
#include "hysop/data/excitation.hpp"
#include "hysop/error.hpp"

using namespace hysop;
using namespace hysop::data;

namespace {

preisach::PreisachModel oracle() {
    return preisach::PreisachModel(
        preisach::EverettMap(preisach::PreisachDensity::gaussian(1000.0)), 1.2);
}

ForcOptions reachable_forc() {
    ForcOptions o;
    o.amp_hi = std::min(1.2, oracle().reachable_limit());
    return o;
}

}  // namespace

TEST_CASE("linspace endpoints and spacing") {
    const auto t = linspace(0.0, 1.0, 198);
    REQUIRE(t.size() == 198);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 1.0);
    for (std::size_t j = 1; j < t.size(); ++j) CHECK(t[j] - t[j - 1] == doctest::Approx(1.0 / 197));
}

TEST_CASE("FORC waveforms are scaled half-sines with amplitudes in range") {
    const auto curves = sample_forc_b(64, 198, 7, ForcOptions{});
    REQUIRE(curves.size() == 64);
    for (const auto& w : curves) {
        CHECK_NOTHROW(w.validate());
        const double amp = *std::max_element(w.values.begin(), w.values.end());
        CHECK(amp >= 0.1 * std::sin(std::numbers::pi * 98 / 197));
        CHECK(amp <= 1.2);
        CHECK(w.values.front() == 0.0);
        CHECK(std::abs(w.values.back()) < 1e-15);
        // ratio to sin(pi t) is a single constant
        for (std::size_t j = 1; j + 1 < w.t.size(); ++j)
            CHECK(w.values[j] / std::sin(std::numbers::pi * w.t[j]) ==
                  doctest::Approx(w.values[98] / std::sin(std::numbers::pi * w.t[98])));
    }
}

TEST_CASE("per-sample streams do not depend on the batch size") {
    const auto small = sample_forc_b(5, 50, 42);
    const auto large = sample_forc_b(20, 50, 42);
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i].values == large[i].values);
    const auto minor_small = sample_minor_b(3, 40, 42);
    const auto minor_large = sample_minor_b(8, 40, 42);
    for (std::size_t i = 0; i < minor_small.size(); ++i)
        CHECK(minor_small[i].values == minor_large[i].values);
    CHECK(sample_forc_b(5, 50, 43)[0].values != small[0].values);
}

TEST_CASE("FORC option validation") {
    ForcOptions bad;
    bad.amp_lo = 0.5;
    bad.amp_hi = 0.4;
    CHECK_THROWS_AS(sample_forc_b(2, 10, 1, bad), ParameterError);
    bad = ForcOptions{};
    bad.amp_hi = 1.3;
    CHECK_THROWS_AS(sample_forc_b(2, 10, 1, bad), ParameterError);
    CHECK_THROWS_AS(sample_forc_b(2, 1, 1), ParameterError);
}

TEST_CASE("minor-loop draws live in span{cos t, sin t} and respect the peak") {
    const auto curves = sample_minor_b(20, 198, 3);
    for (const auto& w : curves) {
        CHECK(w.t.back() == doctest::Approx(3.0 * std::numbers::pi));
        double peak = 0.0;
        for (double v : w.values) peak = std::max(peak, std::abs(v));
        CHECK(peak <= 1.2);
        // least squares fit onto cos/sin; the residual is jitter-sized
        double cc = 0, ss = 0, cs = 0, yc = 0, ys = 0;
        for (std::size_t j = 0; j < w.t.size(); ++j) {
            const double c = std::cos(w.t[j]);
            const double s = std::sin(w.t[j]);
            cc += c * c;
            ss += s * s;
            cs += c * s;
            yc += w.values[j] * c;
            ys += w.values[j] * s;
        }
        const double det = cc * ss - cs * cs;
        const double a = (yc * ss - ys * cs) / det;
        const double b = (ys * cc - yc * cs) / det;
        double resid = 0.0;
        for (std::size_t j = 0; j < w.t.size(); ++j)
            resid = std::max(resid, std::abs(w.values[j] - a * std::cos(w.t[j]) - b * std::sin(w.t[j])));
        CHECK(resid < 1e-3);
    }
}

TEST_CASE("cosine kernel is symmetric with jitter on the diagonal") {
    const auto t = linspace(0.0, 3.0, 5);
    const auto k = cosine_kernel(t, 0.25);
    for (int i = 0; i < 5; ++i) {
        CHECK(k[i * 5 + i] == doctest::Approx(1.25));
        for (int j = 0; j < 5; ++j) CHECK(k[i * 5 + j] == k[j * 5 + i]);
    }
}

TEST_CASE("min-max scaler maps onto [-1, 1] and inverts") {
    const std::vector<double> xs = {-3.0, 1.0, 5.0, 2.5};
    const auto m = MinMax::fit(xs);
    CHECK(m.min == -3.0);
    CHECK(m.max == 5.0);
    CHECK(m.transform(-3.0) == -1.0);
    CHECK(m.transform(5.0) == 1.0);
    for (double x : xs) CHECK(m.inverse(m.transform(x)) == doctest::Approx(x).epsilon(1e-15));
    const std::vector<double> constant = {2.0, 2.0};
    CHECK_THROWS_AS(MinMax::fit(constant), ParameterError);
}

TEST_CASE("random split is a disjoint floor/ceil cover") {
    for (std::size_t n : {1u, 2u, 7u, 400u}) {
        const auto s = random_split(n, 9);
        CHECK(s.train.size() == n / 2);
        CHECK(s.test.size() == n - n / 2);
        std::set<std::size_t> all(s.train.begin(), s.train.end());
        all.insert(s.test.begin(), s.test.end());
        CHECK(all.size() == n);
        CHECK(random_split(n, 9) == s);
    }
}

TEST_CASE("built dataset round-trips through the oracle") {
    const auto model = oracle();
    const auto curves = sample_forc_b(12, 198, 21, reachable_forc());
    const auto ds = build_dataset(curves, model, 21, ExcitationKind::forc);
    CHECK_NOTHROW(ds.validate());
    for (std::size_t i = 0; i < ds.sample_count(); ++i) {
        const auto b = model.forward_sequence(ds.h.row(i));
        for (std::size_t j = 0; j < b.size(); ++j) CHECK(std::abs(b[j] - ds.b(i, j)) < 1e-8);
    }
    const auto& split = ds.require_split();
    const auto& sc = ds.require_scaler();
    const auto htr = ds.h.gather_rows(split.train);
    CHECK(sc.h.min == *std::min_element(htr.values().begin(), htr.values().end()));
    CHECK(sc.h.max == *std::max_element(htr.values().begin(), htr.values().end()));
}

TEST_CASE("dataset construction is deterministic and independent of worker count") {
    const auto model = oracle();
    MinorLoopOptions mo;
    mo.peak = model.reachable_limit();
    const auto curves = sample_minor_b(6, 60, 5, mo);
    BuildOptions serial;
    BuildOptions threaded;
    threaded.workers = 3;
    CHECK(build_dataset(curves, model, 5, ExcitationKind::minor_loop, serial) ==
          build_dataset(curves, model, 5, ExcitationKind::minor_loop, threaded));
}

TEST_CASE("unreachable amplitude is reported with its sample index") {
    const auto model = oracle();
    auto curves = sample_forc_b(3, 20, 1);
    for (auto& v : curves[1].values) v = std::min(v * 100.0, 1.2);
    try {
        build_dataset(curves, model, 1);
        FAIL("expected RangeError");
    } catch (const Error& e) {
        CHECK(e.code() == std::string("range"));
        CHECK(std::string(e.what()).find("sample 1") != std::string::npos);
    }
}

TEST_CASE("CSV round trip is exact") {
    const auto model = oracle();
    auto ds = build_dataset(sample_forc_b(4, 30, 2, reachable_forc()), model, 2);
    std::stringstream io;
    write_csv(io, ds);
    const auto back = read_csv(io);
    CHECK(back.t == ds.t);
    CHECK(back.h == ds.h);
    CHECK(back.b == ds.b);
    std::stringstream bad("sample_id,t,h,b\n0,0,1\n");
    CHECK_THROWS_AS(read_csv(bad), FormatError);
}
