#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gae/dataset.hpp"
#include "gae/latent_mcmc.hpp"
#include "gae/model.hpp"
#include "gae/rng.hpp"

namespace gae {

/// Median of the pairwise Euclidean distances between all rows of A and B
/// pooled together.
double median_pairwise_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Biased (V-statistic) estimate of squared MMD with the Gaussian kernel
/// k(x, y) = exp(-||x - y||^2 / (2 h^2)). Without a bandwidth, h is the
/// median pairwise distance over A and B pooled. Symmetric in A and B and
/// zero when A and B hold the same rows.
double mmd_rbf(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::optional<double> bandwidth = {});

struct GaussianKl {
  double value = 0.0;
  /// The fitted covariance was singular and was regularised with 1e-6 I.
  bool regularized = false;
};

/// KL(N(m, S) || N(0, I)) for the mean and (1/n) covariance fitted to the
/// rows of `samples`.
GaussianKl gaussian_kl_to_prior(const Eigen::MatrixXd& samples);

struct MetricsRow {
  std::size_t step = 0;
  double mmd_to_encoded = 0.0;
  double mmd_to_prior = 0.0;
  double gaussian_kl_to_prior = 0.0;
  bool kl_regularized = false;
  /// Mean Euclidean norm of the latent rows.
  double mean_norm = 0.0;
  double cov_eigen_min = 0.0;
  double cov_eigen_max = 0.0;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;
  double bandwidth = 0.0;
  std::size_t chain_samples = 0;
  std::size_t reference_samples = 0;
  std::size_t prior_samples = 0;
  std::uint64_t seed = 0;
};

/// Per-step diagnostics for z_0 .. z_T of a trace against an encoded
/// reference batch and a fresh prior batch of the chain's size. The kernel
/// bandwidth is fixed from z_0 and the reference at step 0.
MetricsReport chain_diagnostics(const ChainTrace& trace, const LatentBatch& encoded_reference,
                                const PriorSpec& prior, Rng& rng);

std::string metrics_csv(const MetricsReport& report);

struct EvaluationOptions {
  std::size_t chains = 500;
  std::size_t steps = 10;
  bool denoising = false;
  CorruptionSpec corruption{0.0};
  KernelOptions kernel{};
};

/// Encodes every row of `reference` as one batch, starts `chains` chains
/// from the prior, runs them for `steps` transitions and reports
/// chain_diagnostics. Random draws happen in that order.
MetricsReport evaluate_latent_chains(GenerativeAutoencoder& model, const Dataset& reference,
                                     const EvaluationOptions& options, Rng& rng);

struct DenoisingReport {
  Tensor clean;
  Tensor corrupted;
  Tensor reconstruction;
  /// Per-row squared Euclidean distances to the clean rows.
  std::vector<double> corrupted_error;
  std::vector<double> reconstruction_error;

  double mean_corrupted_error() const;
  double mean_reconstruction_error() const;
};

/// Corrupts `clean` with N(x, variance I) noise, encodes the corrupted batch
/// (posterior mean for a VAE) and decodes it, all as one batch in `norm_mode`.
DenoisingReport denoising_errors(GenerativeAutoencoder& model, const Tensor& clean, double variance, Mode norm_mode,
                                 Rng& rng);

std::string denoising_csv(const DenoisingReport& report);

}  // namespace gae
