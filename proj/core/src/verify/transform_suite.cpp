#include <cmath>
#include <numbers>

#include "common.hpp"
#include "hysop/nd/fft.hpp"
#include "hysop/nd/ops.hpp"
#include "hysop/nd/wavelet.hpp"

namespace hysop::verify {

using namespace detail;
using nd::cplx;

namespace {

constexpr std::size_t n = 198;

std::vector<double> random_signal(std::size_t len, std::uint64_t seed) {
    const auto t = random_tensor({len}, seed);
    return {t.values().begin(), t.values().end()};
}

std::vector<cplx> naive_dft(const std::vector<cplx>& x, bool inverse) {
    const std::size_t len = x.size();
    const long double sign = inverse ? 1.0L : -1.0L;
    std::vector<cplx> out(len);
    for (std::size_t k = 0; k < len; ++k) {
        long double re = 0, im = 0;
        for (std::size_t j = 0; j < len; ++j) {
            const long double ang = sign * 2.0L * std::numbers::pi_v<long double> *
                                    static_cast<long double>((j * k) % len) / static_cast<long double>(len);
            const long double c = std::cos(ang), s = std::sin(ang);
            re += x[j].real() * c - x[j].imag() * s;
            im += x[j].real() * s + x[j].imag() * c;
        }
        out[k] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t count) {
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

SuiteResult transform_suite() {
    Stopwatch clock;
    SuiteResult out;
    out.name = "transform";
    const nd::FftPlan plan(n);

    double round_trip = 0.0, real_oracle = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto x = random_signal(n, seed);
        std::vector<cplx> spec(plan.half_size());
        plan.rfft(x, spec);
        std::vector<double> back(n);
        plan.irfft(spec, back);
        for (std::size_t i = 0; i < n; ++i) round_trip = std::max(round_trip, std::abs(back[i] - x[i]));
        std::vector<cplx> xc(x.begin(), x.end());
        real_oracle = std::max(real_oracle, max_diff(spec, naive_dft(xc, false), plan.half_size()));
    }
    out.checks.push_back(below("rfft/irfft round trip, n=198", round_trip, 1e-12));
    out.checks.push_back(below("rfft vs naive DFT, n=198", real_oracle, 1e-9));

    const auto re = random_signal(n, 20), im = random_signal(n, 21);
    std::vector<cplx> z(n), fz(n), iz(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = {re[i], im[i]};
    plan.forward(z, fz);
    plan.inverse(z, iz);
    out.checks.push_back(below("complex forward vs naive DFT, n=198", max_diff(fz, naive_dft(z, false), n), 1e-9));
    out.checks.push_back(below("complex inverse vs naive DFT, n=198", max_diff(iz, naive_dft(z, true), n), 1e-9));

    // The differentiable op goes through the same plan; check it end to end.
    {
        nd::Tape tape;
        const auto x = random_tensor({3, n}, 30);
        auto spec = nd::rfft(tape.constant(x));
        auto back = nd::irfft(spec, n);
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(back.value()[i] - x[i]));
        out.checks.push_back(below("rfft/irfft tensor ops round trip, n=198", worst, 1e-12));
    }

    for (std::size_t len : {n, std::size_t{301}, std::size_t{256}}) {
        const nd::WaveletPlan wp(len, 4);
        double worst = 0.0;
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const auto x = random_signal(len, 40 + seed);
            std::vector<double> c(wp.packed_size()), back(len);
            wp.forward(x, c);
            wp.inverse(c, back);
            for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
        }
        out.checks.push_back(below("db6 dwt/idwt round trip, 4 levels, n=" + std::to_string(len), worst, 1e-10));
    }
    out.seconds = clock.seconds();
    return out;
}

}  // namespace hysop::verify
