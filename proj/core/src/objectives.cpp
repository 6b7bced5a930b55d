#include "gae/objectives.hpp"

#include <cmath>

#include "gae/error.hpp"

namespace gae {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shapes " + shape_string(a.shape()) + " and " +
                     shape_string(b.shape()) + " differ");
  }
}

void require_open_unit(const Tensor& p, const char* what) {
  for (double v : p.values()) {
    if (!(v > 0.0 && v < 1.0)) {
      throw DomainError(std::string(what) + ": probabilities must lie strictly inside (0, 1), got " +
                        std::to_string(v));
    }
  }
}

}  // namespace

Tensor corrupt(const Tensor& x, const CorruptionSpec& spec, Rng& rng) {
  if (!(spec.variance >= 0.0) || !std::isfinite(spec.variance)) {
    throw ContractError("corrupt: variance must be finite and non-negative");
  }
  std::vector<double> out = x.to_vector();
  if (spec.variance > 0.0) {
    const double sd = std::sqrt(spec.variance);
    for (double& v : out) v += sd * rng.normal();
  }
  return Tensor(x.shape(), std::move(out));
}

Tensor recon_cross_entropy(const Tensor& x, const Tensor& x_hat) {
  require_same_shape(x, x_hat, "recon_cross_entropy");
  for (double v : x.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("recon_cross_entropy: targets must lie in [0, 1]");
  }
  require_open_unit(x_hat, "recon_cross_entropy");
  const Tensor one = Tensor::scalar(1.0);
  Tensor ll = x * log(x_hat) + (one - x) * log(one - x_hat);
  return scale(sum(ll), -1.0 / static_cast<double>(x.rows()));
}

Tensor recon_squared_error(const Tensor& x, const Tensor& x_hat) {
  require_same_shape(x, x_hat, "recon_squared_error");
  Tensor r = x_hat - x;
  return scale(sum(r * r), 0.5 / static_cast<double>(x.rows()));
}

Tensor kl_prior_gaussian(const Tensor& mu, const Tensor& sigma) {
  require_same_shape(mu, sigma, "kl_prior_gaussian");
  for (double s : sigma.values()) {
    if (!(s > 0.0)) throw ContractError("kl_prior_gaussian: sigma must be strictly positive");
  }
  Tensor terms = mu * mu + sigma * sigma - scale(log(sigma), 2.0) - Tensor::scalar(1.0);
  return scale(sum(terms), 0.5 / static_cast<double>(mu.rows()));
}

AdversarialLosses adversarial_losses(const Tensor& d_real, const Tensor& d_fake) {
  require_open_unit(d_real, "adversarial_losses");
  require_open_unit(d_fake, "adversarial_losses");
  const Tensor one = Tensor::scalar(1.0);
  Tensor disc = -(mean(log(d_real)) + mean(log(one - d_fake)));
  return {disc, generator_loss(d_fake)};
}

Tensor generator_loss(const Tensor& d_fake) {
  require_open_unit(d_fake, "generator_loss");
  return -mean(log(d_fake));
}

}  // namespace gae
