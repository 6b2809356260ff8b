#pragma once

#include <cstdint>
#include <random>

namespace hysop {

// SplitMix64 finalizer; used to derive independent generator seeds from a
// master seed and a counter so per-item streams do not depend on the order
// in which items are produced.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t counter) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::uint64_t counter) {
    return Rng(stream_seed(master, counter));
}

}  // namespace hysop
