#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "gae/tensor.hpp"

namespace gae {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_parameter = 0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares backward() against central differences for every coordinate of
/// every parameter. The relative error at a coordinate is
/// |analytic - numeric| / (|analytic| + |numeric| + eps). `loss` must rebuild
/// the loss from the current parameter values and be deterministic.
GradCheckReport finite_diff_check(const std::function<Tensor()>& loss,
                                  std::span<Tensor> params, double eps);

}  // namespace gae
