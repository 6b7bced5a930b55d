#pragma once

#include <cstddef>
#include <vector>

#include "gae/rng.hpp"
#include "gae/tensor.hpp"

namespace gae {

enum class Activation { none, relu, leaky_relu, sigmoid, tanh };

/// Train mode normalises with minibatch statistics and applies dropout;
/// eval mode uses running statistics and disables dropout.
enum class Mode { train, eval };

Tensor activate(const Tensor& x, Activation act, double leaky_slope = 0.2);

/// y = act(x W^T + b) for a batch x of shape (n, in). W is stored out x in,
/// so column i of W is the output-space direction fed by input feature i.
class DenseLayer {
 public:
  /// Glorot-uniform weights, zero bias.
  DenseLayer(std::size_t in_features, std::size_t out_features, Activation act, Rng& init,
             double leaky_slope = 0.2);

  Tensor forward(const Tensor& x) const;

  std::size_t in_features() const noexcept { return in_; }
  std::size_t out_features() const noexcept { return out_; }
  Activation activation() const noexcept { return act_; }
  double leaky_slope() const noexcept { return slope_; }

  Tensor& weight() noexcept { return weight_; }
  const Tensor& weight() const noexcept { return weight_; }
  Tensor& bias() noexcept { return bias_; }
  const Tensor& bias() const noexcept { return bias_; }

 private:
  std::size_t in_;
  std::size_t out_;
  Activation act_;
  double slope_;
  Tensor weight_;
  Tensor bias_;
};

struct BatchNormOptions {
  double momentum = 0.1;
  double epsilon = 1e-5;
};

class BatchNormLayer {
 public:
  BatchNormLayer(std::size_t features, BatchNormOptions options = {});

  /// In train mode also folds the batch statistics into the running
  /// estimates, unless tracking is disabled.
  Tensor forward(const Tensor& x);

  void set_mode(Mode mode) noexcept { mode_ = mode; }
  Mode mode() const noexcept { return mode_; }
  void set_track_running_stats(bool track) noexcept { track_ = track; }
  bool track_running_stats() const noexcept { return track_; }

  std::size_t features() const noexcept { return features_; }
  const BatchNormOptions& options() const noexcept { return options_; }

  Tensor& gamma() noexcept { return gamma_; }
  const Tensor& gamma() const noexcept { return gamma_; }
  Tensor& beta() noexcept { return beta_; }
  const Tensor& beta() const noexcept { return beta_; }
  std::vector<double>& running_mean() noexcept { return running_mean_; }
  const std::vector<double>& running_mean() const noexcept { return running_mean_; }
  std::vector<double>& running_var() noexcept { return running_var_; }
  const std::vector<double>& running_var() const noexcept { return running_var_; }

 private:
  std::size_t features_;
  BatchNormOptions options_;
  Mode mode_ = Mode::train;
  bool track_ = true;
  Tensor gamma_;
  Tensor beta_;
  std::vector<double> running_mean_;
  std::vector<double> running_var_;
};

/// Inverted dropout: in train mode each activation is zeroed with
/// probability p and survivors are scaled by 1 / (1 - p).
class Dropout {
 public:
  explicit Dropout(double p);

  Tensor forward(const Tensor& x, Mode mode, Rng* rng) const;
  double probability() const noexcept { return p_; }

 private:
  double p_;
};

}  // namespace gae
