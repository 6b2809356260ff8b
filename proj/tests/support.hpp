#pragma once

#include <algorithm>

#include "hysop/data/dataset.hpp"
#include "hysop/data/excitation.hpp"

namespace hysop::testing {

inline preisach::PreisachModel small_oracle() {
    return preisach::PreisachModel(preisach::EverettMap(preisach::PreisachDensity::gaussian(1000.0), 128), 1.2);
}

// n FORC samples of length T, split and scaled.
inline data::HysteresisDataset small_forc(std::size_t n, std::size_t T, std::uint64_t seed) {
    const auto oracle = small_oracle();
    data::ForcOptions o;
    o.amp_hi = std::min(1.2, oracle.reachable_limit());
    return data::build_dataset(data::sample_forc_b(n, T, seed, o), oracle, seed, data::ExcitationKind::forc);
}

}  // namespace hysop::testing
