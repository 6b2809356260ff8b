#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hysop::nd {

using cplx = std::complex<double>;

// Mixed-radix Cooley-Tukey transform for any length. Prime factors above 5
// fall back to a direct DFT of that radix, which is fine for the short
// lengths used here (198 = 2 * 3 * 3 * 11).
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    const std::vector<std::size_t>& factors() const noexcept { return factors_; }

    // Unnormalized: forward uses exp(-2 pi i jk / n), inverse exp(+2 pi i jk / n).
    void forward(std::span<const cplx> in, std::span<cplx> out) const;
    void inverse(std::span<const cplx> in, std::span<cplx> out) const;

    // Real input, first n/2 + 1 bins of the forward transform.
    void rfft(std::span<const double> x, std::span<cplx> out) const;
    // Hermitian inverse including the 1/n factor. The imaginary parts of
    // bin 0 and (for even n) bin n/2 are ignored.
    void irfft(std::span<const cplx> spec, std::span<double> x) const;

    std::size_t half_size() const noexcept { return n_ / 2 + 1; }

private:
    void run(const cplx* in, cplx* out, std::size_t n, std::size_t stride, std::size_t level,
             bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> factors_;
    std::vector<cplx> twiddle_;  // exp(-2 pi i k / n)
    mutable std::vector<cplx> work_;
};

}  // namespace hysop::nd
