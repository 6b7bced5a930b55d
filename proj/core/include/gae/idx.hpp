#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gae/dataset.hpp"

namespace gae {

/// IDX type code for unsigned bytes; the only element type accepted.
inline constexpr std::uint8_t kIdxUnsignedByte = 0x08;

/// Parses an IDX byte buffer: two zero bytes, a type code, a dimension count
/// and that many big-endian 32-bit extents, followed by exactly
/// prod(extents) unsigned bytes. Rows are the first extent; the remaining
/// extents are flattened. Bytes are scaled from [0, 255] to [0, 1]. A 3-D
/// file is treated as images of extent[1] x extent[2].
///
/// Throws ParseError carrying the byte offset of the first inconsistency.
Dataset parse_idx(std::span<const std::uint8_t> bytes);

Dataset load_idx(const std::filesystem::path& path);

/// Serialises unsigned-byte data in IDX layout.
std::vector<std::uint8_t> encode_idx(std::span<const std::uint32_t> extents, std::span<const std::uint8_t> payload);

}  // namespace gae
