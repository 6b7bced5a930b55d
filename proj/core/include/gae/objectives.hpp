#pragma once

#include "gae/rng.hpp"
#include "gae/tensor.hpp"

namespace gae {

/// Isotropic additive Gaussian corruption N(x, variance * I).
struct CorruptionSpec {
  double variance = 0.25;
};

/// x + eta with eta ~ N(0, variance * I); no clipping. Draws nothing from
/// rng when the variance is zero.
Tensor corrupt(const Tensor& x, const CorruptionSpec& spec, Rng& rng);

/// -sum(x log x_hat + (1 - x) log(1 - x_hat)) over coordinates, averaged over
/// rows. Requires x in [0, 1] and x_hat strictly inside (0, 1).
Tensor recon_cross_entropy(const Tensor& x, const Tensor& x_hat);

/// 0.5 * mean over rows of the squared Euclidean distance.
Tensor recon_squared_error(const Tensor& x, const Tensor& x_hat);

/// KL(N(mu, diag sigma^2) || N(0, I)) = 0.5 * sum(mu^2 + sigma^2 - log sigma^2 - 1),
/// averaged over rows.
Tensor kl_prior_gaussian(const Tensor& mu, const Tensor& sigma);

struct AdversarialLosses {
  /// -mean log D(z_prior) - mean log(1 - D(z_encoded))
  Tensor discriminator;
  /// -mean log D(z_encoded), the non-saturating generator loss
  Tensor generator;
};

AdversarialLosses adversarial_losses(const Tensor& d_real, const Tensor& d_fake);

/// -mean log d_fake on its own, for the encoder update.
Tensor generator_loss(const Tensor& d_fake);

}  // namespace gae
