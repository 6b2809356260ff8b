#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hysop/train/trainer.hpp"

namespace hysop::io {

inline constexpr std::uint16_t hyck_version = 1;

void write_checkpoint(std::ostream& out, const train::Checkpoint& ckpt);
// Rebuilds the model from the stored configuration and rejects any
// parameter inventory that differs from it (FormatError).
train::Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::string& path, const train::Checkpoint& ckpt);
train::Checkpoint load_checkpoint(const std::string& path);

}  // namespace hysop::io
