#pragma once

#include <span>
#include <vector>

namespace hysop::data {

// Affine map of [min, max] onto [-1, 1].
struct MinMax {
    double min = -1.0;
    double max = 1.0;

    static MinMax fit(std::span<const double> values);

    double transform(double x) const noexcept { return 2.0 * (x - min) / (max - min) - 1.0; }
    double inverse(double y) const noexcept { return (y + 1.0) * 0.5 * (max - min) + min; }

    void transform_inplace(std::span<double> xs) const noexcept;
    void inverse_inplace(std::span<double> ys) const noexcept;

    bool operator==(const MinMax&) const = default;
};

// Independent min-max scaling for the H and B fields.
struct MinMaxScaler {
    MinMax h;
    MinMax b;

    bool operator==(const MinMaxScaler&) const = default;
};

}  // namespace hysop::data
