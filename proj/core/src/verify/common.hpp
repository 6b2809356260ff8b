#pragma once

#include <chrono>
#include <random>

#include "hysop/nd/tensor.hpp"
#include "hysop/util/random.hpp"
#include "hysop/verify/suites.hpp"

namespace hysop::verify::detail {

inline Check below(std::string name, double value, double limit) {
    return {std::move(name), value, limit, value < limit};
}

inline Check at_most(std::string name, double value, double limit) {
    return {std::move(name), value, limit, value <= limit};
}

inline nd::Tensor random_tensor(nd::Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    nd::Tensor t(std::move(shape));
    auto rng = make_rng(seed, 0x7e57);
    std::uniform_real_distribution<double> u(lo, hi);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
    return t;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace hysop::verify::detail
