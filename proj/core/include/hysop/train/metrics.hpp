#pragma once

#include <span>

#include "hysop/nd/ops.hpp"

namespace hysop::train {

struct Metrics {
    double r = 0.0;  // relative L2 error
    double mae = 0.0;
    double rmse = 0.0;
    bool operator==(const Metrics&) const = default;
};

// Errors over all flattened entries. Throws ShapeError on a length mismatch
// and NumericError when the target is identically zero.
Metrics metrics(std::span<const double> pred, std::span<const double> target);

// Mean squared difference over all entries, on the tape.
nd::Var mse_loss(nd::Var pred, nd::Var target);

}  // namespace hysop::train
