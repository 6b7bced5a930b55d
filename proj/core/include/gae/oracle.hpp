#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gae/latent_mcmc.hpp"
#include "gae/rng.hpp"

namespace gae {

/// Linear-Gaussian autoencoder: deterministic encoder z = E x, decoder
/// x ~ N(D z, s_dec I), optional corruption x~ ~ N(x, s_cor I). The latent
/// chain is then z' = M z + eta with M = E D and
/// eta ~ N(0, Q), Q = (s_dec + s_cor) E E^T, so every moment is exact.
class OracleSystem {
 public:
  OracleSystem(Eigen::MatrixXd encoder, Eigen::MatrixXd decoder, double decoder_noise_variance,
               double corruption_variance);

  const Eigen::MatrixXd& encoder() const noexcept { return encoder_; }
  const Eigen::MatrixXd& decoder() const noexcept { return decoder_; }
  double decoder_noise_variance() const noexcept { return decoder_noise_variance_; }
  double corruption_variance() const noexcept { return corruption_variance_; }
  std::size_t latent_dim() const noexcept { return static_cast<std::size_t>(encoder_.rows()); }
  std::size_t data_dim() const noexcept { return static_cast<std::size_t>(encoder_.cols()); }

  /// M = E D.
  Eigen::MatrixXd transition() const { return encoder_ * decoder_; }
  /// Q = (s_dec + s_cor) E E^T.
  Eigen::MatrixXd noise_covariance() const;
  double spectral_radius() const;
  bool is_contractive() const { return spectral_radius() < 1.0; }

  /// Same maps and decoder noise with a different corruption variance.
  OracleSystem with_corruption(double variance) const;

 private:
  Eigen::MatrixXd encoder_;
  Eigen::MatrixXd decoder_;
  double decoder_noise_variance_;
  double corruption_variance_;
};

/// Random system of the given shape whose transition has spectral radius
/// `radius` (rescaled decoder), with the given noise variances.
OracleSystem random_contractive_system(std::size_t latent_dim, std::size_t data_dim, double radius,
                                       double decoder_noise_variance, double corruption_variance, Rng& rng);

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// (M m, M C M^T + Q). Throws ContractError for a non-symmetric covariance.
GaussianMoments oracle_transition_moments(const OracleSystem& sys, const Eigen::VectorXd& mean,
                                          const Eigen::MatrixXd& cov);

/// Fixed point of S = M S M^T + Q by iteration from S = 0, stopping once
/// ||M S M^T + Q - S||_F <= tol. Throws DivergenceError when the iteration
/// cap is reached or the iterate stops being finite.
Eigen::MatrixXd solve_stationary_cov(const OracleSystem& sys, double tol,
                                     std::size_t max_iterations = 100000);

/// Samples z_{t+1} = M z_t + E (sqrt(s_dec) xi + sqrt(s_cor) xi') for every
/// row of z0 (n x b). Returns z_0 .. z_T. Noise is drawn per step in the same
/// order as run_chain over wrap_oracle_as_model with denoising enabled:
/// decoder noise for the whole batch, then corruption noise.
std::vector<Eigen::MatrixXd> oracle_sample_chain(const OracleSystem& sys, const Eigen::MatrixXd& z0,
                                                 std::size_t steps, Rng& rng);

/// MarkovKernel view of an oracle system. The corruption variance is not
/// applied here; it enters through denoising_transition_step.
class OracleKernel final : public MarkovKernel {
 public:
  explicit OracleKernel(OracleSystem sys) : sys_(std::move(sys)) {}

  std::size_t latent_dim() const override { return sys_.latent_dim(); }
  std::size_t data_dim() const override { return sys_.data_dim(); }
  Tensor decode(const Tensor& z, Rng& rng) override;
  Tensor encode(const Tensor& x, Rng& rng) override;
  std::uint64_t fingerprint() const override;

  const OracleSystem& system() const noexcept { return sys_; }

 private:
  OracleSystem sys_;
};

OracleKernel wrap_oracle_as_model(const OracleSystem& sys);

Eigen::MatrixXd to_matrix(const Tensor& t);
Tensor to_tensor(const Eigen::MatrixXd& m);

/// Empirical covariance (1/n normalisation) of the rows of `samples`.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples);

/// ||a - b||_F / ||b||_F.
double frobenius_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// -- Verification suite --------------------------------------------------

struct OracleSuiteOptions {
  std::uint64_t seed = 0;
  std::size_t chains = 10000;
  std::size_t steps = 200;
  std::size_t random_systems = 10;
  double lyapunov_tol = 1e-10;
  double sampled_tolerance = 0.05;
  double corruption_tolerance = 0.02;
  /// Scale s of the reference system M = s I (b = 2, Q = I). Values >= 1
  /// make the reference system non-contractive.
  double reference_scale = 0.5;
};

struct OracleCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Moment propagation, Lyapunov residual, sampled-versus-analytic stationary
/// covariance and the corruption augmentation of the one-step covariance.
std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& options);

}  // namespace gae
