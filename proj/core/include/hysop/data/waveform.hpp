#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hysop::data {

// A sampled field on a time grid: tesla for B, A/m for H.
struct Waveform {
    std::vector<double> t;
    std::vector<double> values;

    // Throws ParameterError unless t is strictly increasing, both arrays
    // have equal length and every entry is finite.
    void validate() const;
};

// T equispaced points on [start, stop].
std::vector<double> linspace(double start, double stop, std::size_t count);

// Dense row-major N x T block of samples.
class SampleMatrix {
public:
    SampleMatrix() = default;
    SampleMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    SampleMatrix gather_rows(std::span<const std::size_t> indices) const;

    bool operator==(const SampleMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

}  // namespace hysop::data
