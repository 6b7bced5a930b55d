#include "gae/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gae/error.hpp"
#include "gae/rng.hpp"

namespace gae {

Tensor Dataset::rows(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw ContractError("Dataset::rows: empty index list");
  std::vector<double> out;
  out.reserve(indices.size() * dim);
  for (std::size_t i : indices) {
    if (i >= size()) throw ContractError("Dataset::rows: index " + std::to_string(i) + " out of range");
    out.insert(out.end(), values.begin() + static_cast<std::ptrdiff_t>(i * dim),
               values.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
  }
  return Tensor::matrix(indices.size(), dim, std::move(out));
}

Tensor Dataset::range(std::size_t begin, std::size_t count) const {
  if (count == 0 || begin + count > size()) throw ContractError("Dataset::range: out of range");
  std::vector<double> out(values.begin() + static_cast<std::ptrdiff_t>(begin * dim),
                          values.begin() + static_cast<std::ptrdiff_t>((begin + count) * dim));
  return Tensor::matrix(count, dim, std::move(out));
}

double mixture_rescale(double coordinate, const MixtureOptions& o) {
  const double half_width = o.radius + 4.0 * o.component_std;
  const double unit = (coordinate + half_width) / (2.0 * half_width);
  return std::clamp(0.05 + 0.9 * unit, 0.05, 0.95);
}

Dataset gen_gaussian_mixture(std::size_t n, const MixtureOptions& o, std::uint64_t seed) {
  if (o.components == 0) throw ContractError("gen_gaussian_mixture: need at least one component");
  if (!(o.component_std > 0.0)) throw ContractError("gen_gaussian_mixture: component std must be positive");
  if (!(o.radius >= 0.0)) throw ContractError("gen_gaussian_mixture: radius must be non-negative");
  if (n == 0) throw ContractError("gen_gaussian_mixture: n must be at least 1");
  Rng rng(seed);
  Dataset d;
  d.dim = 2;
  d.source = "mixture:k=" + std::to_string(o.components);
  d.values.reserve(2 * n);
  const double k = static_cast<double>(o.components);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i % o.components) / k;
    const double x = o.radius * std::cos(angle) + o.component_std * rng.normal();
    const double y = o.radius * std::sin(angle) + o.component_std * rng.normal();
    d.values.push_back(mixture_rescale(x, o));
    d.values.push_back(mixture_rescale(y, o));
  }
  return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::size_t train_count) {
  if (train_count == 0 || train_count >= data.size()) {
    throw ContractError("split_dataset: both splits must be non-empty");
  }
  Dataset train = data, test = data;
  const auto cut = data.values.begin() + static_cast<std::ptrdiff_t>(train_count * data.dim);
  train.values.assign(data.values.begin(), cut);
  test.values.assign(cut, data.values.end());
  train.split = Split::train;
  test.split = Split::test;
  return {std::move(train), std::move(test)};
}

}  // namespace gae
