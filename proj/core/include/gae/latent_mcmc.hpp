#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gae/layers.hpp"
#include "gae/model.hpp"
#include "gae/objectives.hpp"
#include "gae/rng.hpp"
#include "gae/tensor.hpp"

namespace gae {

enum class Provenance { prior, encoded, chain, interpolated };

std::string_view provenance_name(Provenance p);

/// n latent vectors (rows of `values`) and where they came from. `step` is
/// the chain step for Provenance::chain and 0 otherwise.
struct LatentBatch {
  Tensor values;
  Provenance provenance = Provenance::prior;
  std::size_t step = 0;

  std::size_t size() const { return values.rows(); }
  std::size_t dim() const { return values.cols(); }
};

/// n independent draws from N(0, I_b).
LatentBatch sample_prior(std::size_t n, const PriorSpec& prior, Rng& rng);

/// Spherical interpolation along the great circle from z1 (t = 0) to z2
/// (t = 1). Falls back to linear interpolation when the angle between the
/// endpoints is below 1e-6; rejects endpoints within 1e-6 of antipodal.
std::vector<double> slerp(std::span<const double> z1, std::span<const double> z2, double t);

/// rows x cols grid, row-major. Corners are ordered top-left, top-right,
/// bottom-left, bottom-right. Each row slerps between the slerped left and
/// right edges.
LatentBatch interpolation_grid(const std::array<std::vector<double>, 4>& corners, std::size_t rows,
                               std::size_t cols);

/// The two conditionals that define the latent chain: a draw from
/// P(X | Z) and a draw from Q(Z | X). Implementations must not modify their
/// parameters while sampling.
class MarkovKernel {
 public:
  virtual ~MarkovKernel() = default;
  virtual std::size_t latent_dim() const = 0;
  virtual std::size_t data_dim() const = 0;
  virtual Tensor decode(const Tensor& z, Rng& rng) = 0;
  virtual Tensor encode(const Tensor& x, Rng& rng) = 0;
  virtual std::uint64_t fingerprint() const = 0;
  virtual Mode norm_mode() const { return Mode::eval; }
};

struct KernelOptions {
  /// Batch-norm mode while sampling. Train mode normalises each chain batch
  /// with its own statistics.
  Mode norm_mode = Mode::train;
  /// Use the VAE posterior mean instead of a reparameterised draw.
  bool encoder_mean = false;
};

/// Samples a trained GenerativeAutoencoder. The decoder mean is used as the
/// draw from P(X | Z); VAE encoders draw z = mu + eps * sigma, AAE encoders
/// are deterministic. While the kernel is alive the model is held in
/// `norm_mode` with running-statistic tracking disabled; both settings are
/// restored on destruction.
class AutoencoderKernel final : public MarkovKernel {
 public:
  explicit AutoencoderKernel(GenerativeAutoencoder& model, KernelOptions options = {});
  ~AutoencoderKernel() override;
  AutoencoderKernel(const AutoencoderKernel&) = delete;
  AutoencoderKernel& operator=(const AutoencoderKernel&) = delete;

  std::size_t latent_dim() const override { return model_.latent_dim(); }
  std::size_t data_dim() const override { return model_.data_dim(); }
  Tensor decode(const Tensor& z, Rng& rng) override;
  Tensor encode(const Tensor& x, Rng& rng) override;
  std::uint64_t fingerprint() const override { return model_.fingerprint(); }
  Mode norm_mode() const override { return options_.norm_mode; }

 private:
  GenerativeAutoencoder& model_;
  KernelOptions options_;
  Mode previous_mode_;
  std::vector<bool> previous_tracking_;
};

struct Transition {
  Tensor x;
  std::optional<Tensor> x_corrupted;
  LatentBatch z;
};

/// x_{t+1} = decode(z_t), z_{t+1} = encode(x_{t+1}).
Transition transition_step(MarkovKernel& kernel, const LatentBatch& z_t, Rng& rng);

/// x_{t+1} = decode(z_t), x~_{t+1} = corrupt(x_{t+1}), z_{t+1} = encode(x~_{t+1}).
Transition denoising_transition_step(MarkovKernel& kernel, const LatentBatch& z_t,
                                     const CorruptionSpec& corruption, Rng& rng);

struct ChainConfig {
  std::size_t steps = 0;
  bool denoising = false;
  CorruptionSpec corruption{0.0};
  Mode norm_mode = Mode::train;
};

/// Records z_0 and, for each t in [0, T), the step's decoded batch x_{t+1},
/// the corrupted batch when denoising, and z_{t+1}.
struct ChainTrace {
  LatentBatch initial;
  std::vector<Transition> steps;
  ChainConfig config;

  std::size_t length() const noexcept { return steps.size(); }
  /// z_t for t in [0, length()].
  const LatentBatch& latent(std::size_t t) const;
};

/// Iterates the (denoising) transition T times from z0. Throws
/// ContractError if the kernel's parameters changed during sampling.
ChainTrace run_chain(MarkovKernel& kernel, const LatentBatch& z0, std::size_t steps, bool denoising,
                     const CorruptionSpec& corruption, Rng& rng);

}  // namespace gae
