#include "hysop/data/waveform.hpp"

#include <cmath>

#include "hysop/data/scaler.hpp"
#include "hysop/error.hpp"

namespace hysop::data {

void Waveform::validate() const {
    if (t.size() != values.size())
        throw ParameterError("waveform time grid and values differ in length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(values[i]))
            throw ParameterError("waveform contains a non-finite entry at index " +
                                 std::to_string(i));
        if (i > 0 && !(t[i] > t[i - 1]))
            throw ParameterError("waveform time grid is not strictly increasing");
    }
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    const double span = stop - start;
    const auto last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = start + span * (static_cast<double>(i) / last);
    if (count > 1) out.back() = stop;
    return out;
}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_)
        throw ShapeError("sample matrix payload does not match its dimensions");
}

SampleMatrix SampleMatrix::gather_rows(std::span<const std::size_t> indices) const {
    SampleMatrix out(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= rows_) throw ShapeError("row index out of range");
        const auto src = row(indices[r]);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

MinMax MinMax::fit(std::span<const double> values) {
    if (values.empty()) throw ParameterError("cannot fit a scaler on no values");
    MinMax m{values[0], values[0]};
    for (double v : values) {
        m.min = std::min(m.min, v);
        m.max = std::max(m.max, v);
    }
    if (!(m.max > m.min)) throw ParameterError("scaler needs max > min");
    return m;
}

void MinMax::transform_inplace(std::span<double> xs) const noexcept {
    for (double& x : xs) x = transform(x);
}

void MinMax::inverse_inplace(std::span<double> ys) const noexcept {
    for (double& y : ys) y = inverse(y);
}

}  // namespace hysop::data
