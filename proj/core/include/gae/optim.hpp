#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gae/tensor.hpp"

namespace gae {

struct AdamOptions {
  double alpha = 0.0002;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  AdamOptions options;
};

/// Bias-corrected Adam over a fixed parameter group. Parameters must be leaf
/// tensors; step() reads their gradients and updates values in place.
class Adam {
 public:
  explicit Adam(std::vector<Tensor> params, AdamOptions options = {});

  /// Throws ContractError if any parameter has no gradient buffer.
  void step();
  void zero_grad();

  const AdamState& state() const noexcept { return state_; }
  std::span<const Tensor> parameters() const noexcept { return params_; }

 private:
  std::vector<Tensor> params_;
  AdamState state_;
};

}  // namespace gae
