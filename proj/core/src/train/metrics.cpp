#include "hysop/train/metrics.hpp"

#include <cmath>

#include "hysop/error.hpp"

namespace hysop::train {

Metrics metrics(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size())
        throw ShapeError("metrics: prediction has " + std::to_string(pred.size()) + " entries, target " +
                         std::to_string(target.size()));
    if (pred.empty()) throw ShapeError("metrics: empty input");
    double se = 0.0, ae = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        se += d * d;
        ae += std::abs(d);
        norm += target[i] * target[i];
    }
    if (norm == 0.0) throw NumericError("relative error undefined: target is identically zero");
    const auto n = static_cast<double>(pred.size());
    return {std::sqrt(se) / std::sqrt(norm), ae / n, std::sqrt(se / n)};
}

nd::Var mse_loss(nd::Var pred, nd::Var target) { return nd::mse(pred, target); }

}  // namespace hysop::train
