#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "hysop/data/waveform.hpp"

namespace hysop::data {

// First-order reversal excitations: b(t) = A sin(pi t) on [0, 1] with
// A ~ Uniform(amp_lo, amp_hi). Sample i draws from its own stream derived
// from (seed, i).
struct ForcOptions {
    double amp_lo = 0.1;
    double amp_hi = 1.2;
    double b_sat = 1.2;  // upper bound for amp_hi
};

std::vector<Waveform> sample_forc_b(std::size_t n, std::size_t samples, std::uint64_t seed,
                                    const ForcOptions& options = {});

// Minor-loop excitations: zero-mean Gaussian-process draws with covariance
// cos(t_i - t_j) on [0, 3 pi]; draws whose peak exceeds `peak` are rescaled
// down to it.
struct MinorLoopOptions {
    double domain_end = 3.0 * std::numbers::pi;
    double jitter = 1e-9;
    double peak = 1.2;
    int max_retries = 3;  // each retry multiplies the jitter by 10
};

std::vector<Waveform> sample_minor_b(std::size_t n, std::size_t samples, std::uint64_t seed,
                                     const MinorLoopOptions& options = {});

// Covariance matrix used by sample_minor_b (row-major, samples x samples).
std::vector<double> cosine_kernel(const std::vector<double>& t, double jitter);

}  // namespace hysop::data
