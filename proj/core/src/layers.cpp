#include "gae/layers.hpp"

#include <cmath>

#include "gae/error.hpp"

namespace gae {

Tensor activate(const Tensor& x, Activation act, double leaky_slope) {
  switch (act) {
    case Activation::none: return x;
    case Activation::relu: return relu(x);
    case Activation::leaky_relu: return leaky_relu(x, leaky_slope);
    case Activation::sigmoid: return sigmoid(x);
    case Activation::tanh: return tanh(x);
  }
  return x;
}

DenseLayer::DenseLayer(std::size_t in_features, std::size_t out_features, Activation act, Rng& init,
                       double leaky_slope)
    : in_(in_features), out_(out_features), act_(act), slope_(leaky_slope) {
  if (in_ == 0 || out_ == 0) throw ContractError("DenseLayer: widths must be at least 1");
  const double limit = std::sqrt(6.0 / static_cast<double>(in_ + out_));
  std::vector<double> w(in_ * out_);
  for (double& v : w) v = init.uniform(-limit, limit);
  weight_ = Tensor::matrix(out_, in_, std::move(w), true);
  bias_ = Tensor::zeros({out_}, true);
}

Tensor DenseLayer::forward(const Tensor& x) const {
  if (x.rank() != 2 || x.cols() != in_) {
    throw ShapeError("DenseLayer: expected input (n, " + std::to_string(in_) + "), got " +
                     shape_string(x.shape()));
  }
  return activate(matmul(x, transpose(weight_)) + bias_, act_, slope_);
}

BatchNormLayer::BatchNormLayer(std::size_t features, BatchNormOptions options)
    : features_(features),
      options_(options),
      gamma_(Tensor::full({features}, 1.0, true)),
      beta_(Tensor::zeros({features}, true)),
      running_mean_(features, 0.0),
      running_var_(features, 1.0) {
  if (!(options.momentum > 0.0 && options.momentum < 1.0)) {
    throw ContractError("BatchNormLayer: momentum must lie in (0, 1)");
  }
  if (!(options.epsilon >= 0.0)) throw ContractError("BatchNormLayer: epsilon must be non-negative");
}

Tensor BatchNormLayer::forward(const Tensor& x) {
  if (x.rank() != 2 || x.cols() != features_) {
    throw ShapeError("BatchNormLayer: expected input (n, " + std::to_string(features_) + "), got " +
                     shape_string(x.shape()));
  }
  if (mode_ == Mode::train) {
    std::vector<double> batch_mean, batch_var;
    Tensor normalized = normalize_batch(x, options_.epsilon, &batch_mean, &batch_var);
    if (track_) {
      const double n = static_cast<double>(x.rows());
      const double unbias = n > 1.0 ? n / (n - 1.0) : 1.0;
      const double m = options_.momentum;
      for (std::size_t j = 0; j < features_; ++j) {
        running_mean_[j] = (1.0 - m) * running_mean_[j] + m * batch_mean[j];
        running_var_[j] = (1.0 - m) * running_var_[j] + m * batch_var[j] * unbias;
      }
    }
    return normalized * gamma_ + beta_;
  }
  std::vector<double> inv_std(features_);
  for (std::size_t j = 0; j < features_; ++j) {
    inv_std[j] = 1.0 / std::sqrt(running_var_[j] + options_.epsilon);
  }
  Tensor centered = x - Tensor::vector(running_mean_);
  return centered * Tensor::vector(std::move(inv_std)) * gamma_ + beta_;
}

Dropout::Dropout(double p) : p_(p) {
  if (!(p >= 0.0 && p < 1.0)) throw ContractError("Dropout: probability must lie in [0, 1)");
}

Tensor Dropout::forward(const Tensor& x, Mode mode, Rng* rng) const {
  if (mode == Mode::eval || p_ == 0.0) return x;
  if (rng == nullptr) throw ContractError("Dropout: train mode needs a random stream");
  std::vector<double> mask(x.size());
  const double keep_scale = 1.0 / (1.0 - p_);
  for (double& m : mask) m = rng->uniform() < p_ ? 0.0 : keep_scale;
  return x * Tensor(x.shape(), std::move(mask));
}

}  // namespace gae
