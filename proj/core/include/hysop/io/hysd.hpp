#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hysop/data/dataset.hpp"

namespace hysop::io {

inline constexpr std::uint16_t hysd_version = 1;

// Binary dataset container; byte layout in FORMATS.md.
void write_hysd(std::ostream& out, const data::HysteresisDataset& dataset);
data::HysteresisDataset read_hysd(std::istream& in);

void save_hysd(const std::string& path, const data::HysteresisDataset& dataset);
data::HysteresisDataset load_hysd(const std::string& path);

}  // namespace hysop::io
