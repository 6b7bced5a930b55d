#include "gae/idx.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "gae/error.hpp"

namespace gae {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::string hex(std::uint32_t v) {
  std::ostringstream s;
  s << "0x" << std::hex << v;
  return s.str();
}

}  // namespace

Dataset parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw ParseError("idx: truncated magic number", bytes.size());
  if (bytes[0] != 0 || bytes[1] != 0) {
    throw ParseError("idx: bad magic number " + hex(read_be32(bytes, 0)), bytes[0] != 0 ? 0 : 1);
  }
  if (bytes[2] != kIdxUnsignedByte) {
    throw ParseError("idx: unsupported type code " + hex(bytes[2]), 2);
  }
  const std::size_t ndims = bytes[3];
  if (ndims == 0) throw ParseError("idx: zero dimensions", 3);
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) throw ParseError("idx: truncated dimension header", bytes.size());

  std::vector<std::size_t> extents(ndims);
  std::size_t payload = 1;
  for (std::size_t k = 0; k < ndims; ++k) {
    extents[k] = read_be32(bytes, 4 + 4 * k);
    if (extents[k] == 0) throw ParseError("idx: zero extent in dimension " + std::to_string(k), 4 + 4 * k);
    if (payload > (std::size_t{1} << 40) / extents[k]) {
      throw ParseError("idx: payload size overflows", 4 + 4 * k);
    }
    payload *= extents[k];
  }
  if (bytes.size() < header + payload) {
    throw ParseError("idx: truncated payload, expected " + std::to_string(payload) + " bytes, found " +
                         std::to_string(bytes.size() - header),
                     bytes.size());
  }
  if (bytes.size() > header + payload) {
    throw ParseError("idx: " + std::to_string(bytes.size() - header - payload) + " trailing bytes", header + payload);
  }

  Dataset d;
  d.dim = payload / extents[0];
  d.values.reserve(payload);
  for (std::size_t i = header; i < bytes.size(); ++i) d.values.push_back(static_cast<double>(bytes[i]) / 255.0);
  if (ndims == 3) {
    d.image_height = extents[1];
    d.image_width = extents[2];
  }
  d.source = "idx";
  return d;
}

Dataset load_idx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("idx: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Dataset d = parse_idx(bytes);
  d.source = "idx:" + path.string();
  return d;
}

std::vector<std::uint8_t> encode_idx(std::span<const std::uint32_t> extents, std::span<const std::uint8_t> payload) {
  if (extents.empty() || extents.size() > 255) throw ContractError("encode_idx: 1..255 dimensions required");
  std::vector<std::uint8_t> out{0, 0, kIdxUnsignedByte, static_cast<std::uint8_t>(extents.size())};
  std::size_t expected = 1;
  for (std::uint32_t e : extents) {
    expected *= e;
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(e >> shift));
  }
  if (expected != payload.size()) throw ContractError("encode_idx: payload size does not match extents");
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

}  // namespace gae
