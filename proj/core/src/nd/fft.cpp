#include "hysop/nd/fft.hpp"

#include <cmath>
#include <numbers>

#include "hysop/error.hpp"

namespace hysop::nd {

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw ParameterError("FFT length must be at least 1");
    std::size_t rest = n;
    for (std::size_t p : {4u, 2u, 3u, 5u}) {
        while (rest % p == 0) {
            factors_.push_back(p);
            rest /= p;
        }
    }
    for (std::size_t p = 7; rest > 1; p += 2) {
        while (rest % p == 0) {
            factors_.push_back(p);
            rest /= p;
        }
    }
    twiddle_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle_[k] = {std::cos(th), std::sin(th)};
    }
    work_.resize(n);
}

void FftPlan::run(const cplx* in, cplx* out, std::size_t n, std::size_t stride, std::size_t level,
                  bool inverse) const {
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const std::size_t p = factors_[level];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) run(in + q * stride, out + q * m, m, stride * p, level + 1, inverse);

    // Twiddles of the length-n stage are every (n_ / n)-th entry of the table.
    const std::size_t step = n_ / n;
    auto w = [&](std::size_t k) {
        const cplx v = twiddle_[(k * step) % n_];
        return inverse ? std::conj(v) : v;
    };
    cplx buf[64];
    std::vector<cplx> big;
    cplx* y = buf;
    if (p > 64) {
        big.resize(p);
        y = big.data();
    }
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t q = 0; q < p; ++q) y[q] = out[q * m + k] * w(q * k);
        if (p == 2) {
            out[k] = y[0] + y[1];
            out[k + m] = y[0] - y[1];
        } else if (p == 4) {
            const cplx a = y[0] + y[2];
            const cplx b = y[0] - y[2];
            const cplx c = y[1] + y[3];
            cplx d = y[1] - y[3];
            d = inverse ? cplx(-d.imag(), d.real()) : cplx(d.imag(), -d.real());
            out[k] = a + c;
            out[k + m] = b + d;
            out[k + 2 * m] = a - c;
            out[k + 3 * m] = b - d;
        } else {
            for (std::size_t s = 0; s < p; ++s) {
                cplx acc = 0.0;
                for (std::size_t q = 0; q < p; ++q) acc += y[q] * w(((q * s) % p) * m);
                out[k + s * m] = acc;
            }
        }
    }
}

void FftPlan::forward(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_) throw ShapeError("FFT buffer length mismatch");
    if (in.data() == out.data()) {
        std::copy(in.begin(), in.end(), work_.begin());
        run(work_.data(), out.data(), n_, 1, 0, false);
    } else {
        run(in.data(), out.data(), n_, 1, 0, false);
    }
}

void FftPlan::inverse(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_) throw ShapeError("FFT buffer length mismatch");
    if (in.data() == out.data()) {
        std::copy(in.begin(), in.end(), work_.begin());
        run(work_.data(), out.data(), n_, 1, 0, true);
    } else {
        run(in.data(), out.data(), n_, 1, 0, true);
    }
}

void FftPlan::rfft(std::span<const double> x, std::span<cplx> out) const {
    if (x.size() != n_ || out.size() != half_size())
        throw ShapeError("rfft expects " + std::to_string(n_) + " samples and " +
                         std::to_string(half_size()) + " bins");
    std::vector<cplx> in(x.begin(), x.end());
    std::vector<cplx> full(n_);
    run(in.data(), full.data(), n_, 1, 0, false);
    std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(half_size()), out.begin());
}

void FftPlan::irfft(std::span<const cplx> spec, std::span<double> x) const {
    if (x.size() != n_ || spec.size() != half_size())
        throw ShapeError("irfft expects " + std::to_string(half_size()) + " bins for length " +
                         std::to_string(n_));
    const std::size_t kk = half_size();
    std::vector<cplx> full(n_);
    full[0] = spec[0].real();
    for (std::size_t k = 1; k < kk; ++k) {
        full[k] = spec[k];
        if (n_ - k != k) full[n_ - k] = std::conj(spec[k]);
        else full[k] = spec[k].real();
    }
    std::vector<cplx> out(n_);
    run(full.data(), out.data(), n_, 1, 0, true);
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = out[j].real() * inv_n;
}

}  // namespace hysop::nd
