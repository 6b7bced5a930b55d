#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gae/model.hpp"

namespace gae {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct LoadedCheckpoint {
  GenerativeAutoencoder model;
  /// Free-form training configuration text stored alongside the weights.
  std::string config_echo;
};

/// Layout, all integers and floats little-endian:
///   "GAECKPT\0"  u32 version  body  u32 crc32(body)
/// where body holds the model descriptor, the config echo, every parameter
/// tensor (shape then f64 values) and every batch-norm running mean and
/// variance, in model order.
std::vector<std::uint8_t> encode_checkpoint(const GenerativeAutoencoder& model, const std::string& config_echo = {});

/// Throws ParseError for a bad magic or malformed body, VersionError for an
/// unknown version and ChecksumError when the body does not match its crc.
LoadedCheckpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const GenerativeAutoencoder& model, const std::filesystem::path& path,
                     const std::string& config_echo = {});
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gae
