#include "gae/optim.hpp"

#include <cmath>
#include <string>

#include "gae/error.hpp"

namespace gae {

Adam::Adam(std::vector<Tensor> params, AdamOptions options) : params_(std::move(params)) {
  const AdamOptions& o = options;
  if (!(o.alpha > 0.0) || !(o.epsilon > 0.0) || !(o.beta1 >= 0.0 && o.beta1 < 1.0) ||
      !(o.beta2 >= 0.0 && o.beta2 < 1.0)) {
    throw ContractError("Adam: require alpha > 0, epsilon > 0 and beta1, beta2 in [0, 1)");
  }
  state_.options = options;
  for (const Tensor& p : params_) {
    if (!p.is_leaf()) throw ContractError("Adam: parameters must be leaf tensors");
    state_.m.emplace_back(p.size(), 0.0);
    state_.v.emplace_back(p.size(), 0.0);
  }
}

void Adam::zero_grad() {
  for (Tensor& p : params_) p.zero_grad();
}

void Adam::step() {
  for (std::size_t k = 0; k < params_.size(); ++k) {
    if (!params_[k].has_grad()) {
      throw ContractError("Adam: parameter " + std::to_string(k) + " has no gradient");
    }
  }
  const AdamOptions& o = state_.options;
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto values = params_[k].mutable_values();
    auto grad = params_[k].grad();
    auto& m = state_.m[k];
    auto& v = state_.v[k];
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= o.alpha * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

}  // namespace gae
