#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sdcl/model.hpp"

namespace sdcl {

/// Checkpoint byte layout (all integers little-endian, floats IEEE-754
/// binary64 little-endian):
///
///   0   char[8]  magic "SDCLCKPT"
///   8   u32      format version (kCheckpointVersion)
///   12  u32      activation (0 = relu, 1 = tanh)
///   16  u64      input_dim
///   24  u64      num_classes
///   32  u64      seed
///   40  u64      epoch_tag
///   48  u64      H = number of hidden layers
///   56  u64[H]   hidden widths
///   ..  u64      P = parameter count
///   ..  f64[P]   parameters
///   ..  u64      FNV-1a 64 of every preceding byte
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const ModelState& state);
ModelState decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_state(const ModelState& state, const std::filesystem::path& path);
ModelState load_state(const std::filesystem::path& path);

}  // namespace sdcl
