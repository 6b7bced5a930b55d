#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gae/tensor.hpp"

namespace gae {

enum class Split { train, test };

/// n samples of dimension `dim`, row-major, every value in [0, 1].
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> values;
  Split split = Split::train;
  std::string source;
  /// Non-zero for image data (image_height * image_width == dim).
  std::size_t image_height = 0;
  std::size_t image_width = 0;

  std::size_t size() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  bool is_image() const noexcept { return image_height > 0 && image_width > 0; }

  /// Rows at the given indices, as an (indices.size(), dim) tensor.
  Tensor rows(std::span<const std::size_t> indices) const;
  /// Rows [begin, begin + count).
  Tensor range(std::size_t begin, std::size_t count) const;
  Tensor all() const { return range(0, size()); }
};

struct MixtureOptions {
  std::size_t components = 8;
  double radius = 2.0;
  double component_std = 0.05;
};

/// 2-D mixture of `components` isotropic Gaussians with means evenly spaced
/// on a circle (angle 2*pi*j/k), affinely mapped into [0.05, 0.95]^2. Sample
/// i belongs to component i mod k, so membership is balanced. The affine map
/// sends [-(radius + 4 std), radius + 4 std] onto [0.05, 0.95] and the rare
/// points beyond are clamped to that box.
Dataset gen_gaussian_mixture(std::size_t n, const MixtureOptions& options, std::uint64_t seed);

/// The affine map used by gen_gaussian_mixture, exposed for tests.
double mixture_rescale(double coordinate, const MixtureOptions& options);

/// First `train_count` rows become the train split, the rest the test split.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t train_count);

}  // namespace gae
