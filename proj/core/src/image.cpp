#include "gae/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "gae/error.hpp"

namespace gae {

namespace {

constexpr std::size_t kSeparator = 2;
constexpr std::uint8_t kSeparatorValue = 128;

}  // namespace

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

GreyImage render_grid(std::span<const double> images, std::size_t count, std::size_t rows, std::size_t cols,
                      std::size_t height, std::size_t width) {
  if (rows == 0 || cols == 0 || height == 0 || width == 0) {
    throw ContractError("render_grid: grid and image extents must be positive");
  }
  if (count > rows * cols) throw ContractError("render_grid: more images than grid cells");
  if (images.size() != count * height * width) {
    throw ContractError("render_grid: image data does not match count * height * width");
  }
  GreyImage out;
  out.width = cols * width + (cols - 1) * kSeparator;
  out.height = rows * height + (rows - 1) * kSeparator;
  out.pixels.assign(out.width * out.height, kSeparatorValue);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t top = (k / cols) * (height + kSeparator);
    const std::size_t left = (k % cols) * (width + kSeparator);
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x)
        out.pixels[(top + y) * out.width + left + x] = to_byte(images[k * height * width + y * width + x]);
  }
  return out;
}

std::string encode_pgm(const GreyImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

GreyImage decode_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_number = [&]() -> std::size_t {
    skip_space();
    const std::size_t start = pos;
    std::size_t v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
    if (pos == start) throw ParseError("pgm: expected a number", start);
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw ParseError("pgm: not a P5 file", 0);
  pos = 2;
  GreyImage img;
  img.width = read_number();
  img.height = read_number();
  const std::size_t maxval = read_number();
  if (maxval != 255) throw ParseError("pgm: only maxval 255 is supported", pos);
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw ParseError("pgm: missing header terminator", pos);
  ++pos;
  if (bytes.size() - pos != img.width * img.height) throw ParseError("pgm: payload size mismatch", pos);
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  return img;
}

void write_image_grid(const std::filesystem::path& path, std::span<const double> images, std::size_t count,
                      std::size_t rows, std::size_t cols, std::size_t height, std::size_t width) {
  const std::string data = encode_pgm(render_grid(images, count, rows, cols, height, width));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

GreyImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

}  // namespace gae
