#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hysop::nd {

// Daubechies-6 decomposition filters (12 taps).
const std::array<double, 12>& db6_dec_lo();
const std::array<double, 12>& db6_dec_hi();

// Multi-level periodized db6 transform of a fixed signal length. Odd
// lengths at any level are extended by repeating the last sample before
// halving, as pywt does for mode "periodization". Coefficients are packed
// as [a_L, d_L, d_{L-1}, ..., d_1].
class WaveletPlan {
public:
    WaveletPlan(std::size_t length, std::size_t levels);

    // Largest level count whose inputs stay at least one filter length long.
    static std::size_t max_levels(std::size_t length);

    std::size_t length() const noexcept { return length_; }
    std::size_t levels() const noexcept { return levels_; }
    std::size_t packed_size() const noexcept { return packed_; }
    std::size_t approx_size() const noexcept { return band_len_.front(); }
    // Band lengths in packed order: a_L, d_L, ..., d_1.
    const std::vector<std::size_t>& band_lengths() const noexcept { return band_len_; }

    void forward(std::span<const double> x, std::span<double> coeffs) const;
    void inverse(std::span<const double> coeffs, std::span<double> x) const;
    // Transposes of the two linear maps above (they differ from each other
    // when a level pads an odd length).
    void forward_adjoint(std::span<const double> g_coeffs, std::span<double> g_x) const;
    void inverse_adjoint(std::span<const double> g_x, std::span<double> g_coeffs) const;

    // Row-major dense maps of the approximation band alone: analysis
    // [approx, length] and synthesis from a_L with zero details [length, approx].
    const std::vector<double>& approx_analysis() const noexcept { return approx_fwd_; }
    const std::vector<double>& approx_synthesis() const noexcept { return approx_inv_; }

private:
    std::size_t length_;
    std::size_t levels_;
    std::size_t packed_ = 0;
    std::vector<std::size_t> in_len_;      // input length of level l (l = 0 is finest)
    std::vector<std::size_t> band_len_;    // packed order
    std::vector<std::size_t> detail_off_;  // offset of d_{l+1} in the packed vector
    std::vector<double> approx_fwd_, approx_inv_;
    mutable std::vector<double> work_a_, work_b_;
};

}  // namespace hysop::nd
