#include "hysop/nd/wavelet.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "hysop/error.hpp"

namespace hysop::nd {

namespace {

constexpr std::size_t taps = 12;
constexpr std::size_t shift = taps / 2;

// Single level on a buffer of even length m: out_a, out_d of length m / 2.
// a[k] = sum_j lo[j] x[(2k + shift - j) mod m], evaluated on a periodic
// extension so the tap loop has no wraparound.
void analyze(const double* x, std::size_t m, double* a, double* d) {
    const auto& lo = db6_dec_lo();
    const auto& hi = db6_dec_hi();
    constexpr std::size_t left = taps - 1 - shift;
    thread_local std::vector<double> ext;
    ext.resize(m + taps);
    for (std::size_t i = 0; i < m + taps - 1; ++i) ext[i] = x[(i + m * taps - left) % m];
    for (std::size_t k = 0; k < m / 2; ++k) {
        // ext[2k + taps - 1 - j] = x[2k + shift - j]
        const double* base = ext.data() + 2 * k + taps - 1;
        double sa = 0.0;
        double sd = 0.0;
        for (std::size_t j = 0; j < taps; ++j) {
            const double v = *(base - j);
            sa += lo[j] * v;
            sd += hi[j] * v;
        }
        a[k] = sa;
        d[k] = sd;
    }
}

// Transpose of analyze: y (length m) = A^T [a; d].
void synthesize(const double* a, const double* d, std::size_t m, double* y) {
    const auto& lo = db6_dec_lo();
    const auto& hi = db6_dec_hi();
    constexpr std::size_t left = taps - 1 - shift;
    thread_local std::vector<double> ext;
    ext.assign(m + taps, 0.0);
    for (std::size_t k = 0; k < m / 2; ++k) {
        double* base = ext.data() + 2 * k + taps - 1;
        for (std::size_t j = 0; j < taps; ++j) *(base - j) += lo[j] * a[k] + hi[j] * d[k];
    }
    std::fill(y, y + m, 0.0);
    for (std::size_t i = 0; i < m + taps - 1; ++i) y[(i + m * taps - left) % m] += ext[i];
}

}  // namespace

const std::array<double, 12>& db6_dec_lo() {
    static const std::array<double, 12> lo = {
        -0.0010773010853084796, 0.004777257510945511,  0.0005538422011614961,
        -0.03158203931748603,   0.027522865530305727,  0.09750160558732304,
        -0.12976686756726194,   -0.22626469396543983,  0.31525035170919763,
        0.7511339080210954,     0.49462389039845306,   0.11154074335010947};
    return lo;
}

const std::array<double, 12>& db6_dec_hi() {
    static const std::array<double, 12> hi = [] {
        std::array<double, 12> h{};
        const auto& lo = db6_dec_lo();
        for (std::size_t j = 0; j < taps; ++j)
            h[j] = (j % 2 == 0 ? -1.0 : 1.0) * lo[taps - 1 - j];
        return h;
    }();
    return hi;
}

std::size_t WaveletPlan::max_levels(std::size_t length) {
    std::size_t levels = 0;
    while (length / (taps - 1) >= (std::size_t{1} << (levels + 1))) ++levels;
    return levels;
}

WaveletPlan::WaveletPlan(std::size_t length, std::size_t levels) : length_(length), levels_(levels) {
    if (levels == 0) throw ParameterError("wavelet decomposition needs at least one level");
    std::size_t m = length;
    std::vector<std::size_t> details;
    for (std::size_t l = 0; l < levels; ++l) {
        if (m < taps)
            throw ShapeError("signal of length " + std::to_string(length) + " too short for db6 level " +
                             std::to_string(l + 1) + " (input " + std::to_string(m) + " < " +
                             std::to_string(taps) + ")");
        in_len_.push_back(m);
        m = (m + 1) / 2;
        details.push_back(m);
    }
    band_len_.push_back(m);
    for (std::size_t l = levels; l-- > 0;) band_len_.push_back(details[l]);
    packed_ = 0;
    for (std::size_t b : band_len_) packed_ += b;
    detail_off_.resize(levels);
    std::size_t off = band_len_[0];
    for (std::size_t l = levels; l-- > 0;) {
        detail_off_[l] = off;
        off += details[l];
    }
    work_a_.resize(length + 1);
    work_b_.resize(length + 1);

    const std::size_t na = band_len_[0];
    approx_fwd_.assign(na * length, 0.0);
    approx_inv_.assign(length * na, 0.0);
    std::vector<double> unit(length, 0.0), coeffs(packed_, 0.0), signal(length, 0.0);
    for (std::size_t j = 0; j < length; ++j) {
        unit[j] = 1.0;
        forward(unit, coeffs);
        for (std::size_t k = 0; k < na; ++k) approx_fwd_[k * length + j] = coeffs[k];
        unit[j] = 0.0;
    }
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    for (std::size_t k = 0; k < na; ++k) {
        coeffs[k] = 1.0;
        inverse(coeffs, signal);
        for (std::size_t j = 0; j < length; ++j) approx_inv_[j * na + k] = signal[j];
        coeffs[k] = 0.0;
    }
}

void WaveletPlan::forward(std::span<const double> x, std::span<double> coeffs) const {
    if (x.size() != length_ || coeffs.size() != packed_) throw ShapeError("dwt buffer length mismatch");
    std::copy(x.begin(), x.end(), work_a_.begin());
    for (std::size_t l = 0; l < levels_; ++l) {
        std::size_t m = in_len_[l];
        if (m % 2) work_a_[m] = work_a_[m - 1], ++m;
        analyze(work_a_.data(), m, work_b_.data(), coeffs.data() + detail_off_[l]);
        std::copy(work_b_.begin(), work_b_.begin() + static_cast<std::ptrdiff_t>(m / 2), work_a_.begin());
    }
    std::copy(work_a_.begin(), work_a_.begin() + static_cast<std::ptrdiff_t>(band_len_[0]), coeffs.begin());
}

void WaveletPlan::inverse(std::span<const double> coeffs, std::span<double> x) const {
    if (x.size() != length_ || coeffs.size() != packed_) throw ShapeError("idwt buffer length mismatch");
    std::copy(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(band_len_[0]), work_a_.begin());
    for (std::size_t l = levels_; l-- > 0;) {
        const std::size_t m = in_len_[l];
        const std::size_t padded = m + m % 2;
        synthesize(work_a_.data(), coeffs.data() + detail_off_[l], padded, work_b_.data());
        std::copy(work_b_.begin(), work_b_.begin() + static_cast<std::ptrdiff_t>(m), work_a_.begin());
    }
    std::copy(work_a_.begin(), work_a_.begin() + static_cast<std::ptrdiff_t>(length_), x.begin());
}

void WaveletPlan::forward_adjoint(std::span<const double> g_coeffs, std::span<double> g_x) const {
    if (g_x.size() != length_ || g_coeffs.size() != packed_) throw ShapeError("dwt buffer length mismatch");
    std::copy(g_coeffs.begin(), g_coeffs.begin() + static_cast<std::ptrdiff_t>(band_len_[0]),
              work_a_.begin());
    for (std::size_t l = levels_; l-- > 0;) {
        const std::size_t m = in_len_[l];
        const std::size_t padded = m + m % 2;
        synthesize(work_a_.data(), g_coeffs.data() + detail_off_[l], padded, work_b_.data());
        // transpose of the edge padding folds the copy back onto the last sample
        if (padded != m) work_b_[m - 1] += work_b_[m];
        std::copy(work_b_.begin(), work_b_.begin() + static_cast<std::ptrdiff_t>(m), work_a_.begin());
    }
    std::copy(work_a_.begin(), work_a_.begin() + static_cast<std::ptrdiff_t>(length_), g_x.begin());
}

void WaveletPlan::inverse_adjoint(std::span<const double> g_x, std::span<double> g_coeffs) const {
    if (g_x.size() != length_ || g_coeffs.size() != packed_) throw ShapeError("idwt buffer length mismatch");
    std::copy(g_x.begin(), g_x.end(), work_a_.begin());
    for (std::size_t l = 0; l < levels_; ++l) {
        std::size_t m = in_len_[l];
        if (m % 2) work_a_[m] = 0.0, ++m;
        analyze(work_a_.data(), m, work_b_.data(), g_coeffs.data() + detail_off_[l]);
        std::copy(work_b_.begin(), work_b_.begin() + static_cast<std::ptrdiff_t>(m / 2), work_a_.begin());
    }
    std::copy(work_a_.begin(), work_a_.begin() + static_cast<std::ptrdiff_t>(band_len_[0]), g_coeffs.begin());
}

}  // namespace hysop::nd
