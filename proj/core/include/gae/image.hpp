#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gae {

/// 8-bit greyscale raster.
struct GreyImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// round(clamp(v, 0, 1) * 255).
std::uint8_t to_byte(double v);

/// Tiles `images` (m rows of height * width values, row-major) into a
/// rows x cols grid with 2-pixel separators of intensity 128. Unused cells
/// are filled with 128.
GreyImage render_grid(std::span<const double> images, std::size_t count, std::size_t rows, std::size_t cols,
                      std::size_t height, std::size_t width);

/// Binary PGM (P5), maxval 255.
std::string encode_pgm(const GreyImage& image);
GreyImage decode_pgm(std::span<const std::uint8_t> bytes);

void write_image_grid(const std::filesystem::path& path, std::span<const double> images, std::size_t count,
                      std::size_t rows, std::size_t cols, std::size_t height, std::size_t width);
GreyImage read_pgm(const std::filesystem::path& path);

}  // namespace gae
