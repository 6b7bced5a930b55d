#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gae/layers.hpp"
#include "gae/rng.hpp"
#include "gae/tensor.hpp"

namespace gae {

enum class Variant { vae, aae };

std::string_view variant_name(Variant v);

/// Isotropic unit Gaussian N(0, I) over R^dim.
struct PriorSpec {
  std::size_t dim = 2;
};

struct ModelSpec {
  Variant variant = Variant::vae;
  bool denoising = false;
  double corruption_variance = 0.25;
  std::size_t data_dim = 2;
  std::size_t latent_dim = 2;
  std::vector<std::size_t> encoder_hidden{64, 64};
  std::vector<std::size_t> decoder_hidden{64, 64};
  std::vector<std::size_t> adversary_hidden{64, 64};
  double leaky_slope = 0.2;
  double dropout = 0.5;
  BatchNormOptions batch_norm{};
  /// Non-zero when rows are images; used only for rendering.
  std::size_t image_height = 0;
  std::size_t image_width = 0;
};

struct VaeEncoding {
  Tensor z;
  Tensor mu;
  Tensor sigma;
};

/// Linear -> (batch norm) -> activation.
struct HiddenBlock {
  DenseLayer linear;
  std::optional<BatchNormLayer> norm;
  Dropout dropout{0.0};
};

/// Encoder, decoder and (for AAE) adversary networks of a VAE, AAE or their
/// denoising variants.
///
/// Construction enforces the support conditions the latent chain relies on:
/// a VAE head emits 2b values (mu and log sigma, so sigma = exp(.) > 0), and
/// the final dense layer of an AAE encoder must receive at least b input
/// features so its weight columns can span the latent space.
class GenerativeAutoencoder {
 public:
  GenerativeAutoencoder(ModelSpec spec, Rng& init);

  const ModelSpec& spec() const noexcept { return spec_; }
  Variant variant() const noexcept { return spec_.variant; }
  std::size_t latent_dim() const noexcept { return spec_.latent_dim; }
  std::size_t data_dim() const noexcept { return spec_.data_dim; }
  PriorSpec prior() const noexcept { return {spec_.latent_dim}; }

  /// Raw encoder output: (n, 2b) for VAE, (n, b) for AAE.
  Tensor encoder_head(const Tensor& x);

  /// Reparameterised draw z = mu + eps * sigma with eps ~ N(0, I) from rng.
  VaeEncoding encode_vae(const Tensor& x, Rng& rng);
  /// Same with caller-provided noise of shape (n, b).
  VaeEncoding encode_vae(const Tensor& x, const Tensor& noise);
  /// Deterministic encoding.
  Tensor encode_aae(const Tensor& x);

  /// Decoder mean in (0, 1)^a.
  Tensor decode(const Tensor& z);

  /// One probability per latent row that the row came from the prior.
  Tensor adversary_score(const Tensor& z, Mode mode, Rng* rng);

  void set_norm_mode(Mode mode);
  Mode norm_mode() const noexcept { return norm_mode_; }
  void set_track_running_stats(bool track);

  std::vector<Tensor> encoder_parameters() const;
  std::vector<Tensor> decoder_parameters() const;
  std::vector<Tensor> adversary_parameters() const;
  /// Encoder, decoder, adversary, in that order.
  std::vector<Tensor> parameters() const;

  /// Encoder layers first, then decoder layers.
  std::vector<BatchNormLayer*> batch_norm_layers();
  std::vector<const BatchNormLayer*> batch_norm_layers() const;

  /// Hash of every parameter and running statistic.
  std::uint64_t fingerprint() const;

 private:
  void check_input(const Tensor& t, std::size_t width, std::string_view what) const;
  Tensor run_encoder_trunk(const Tensor& x);

  ModelSpec spec_;
  Mode norm_mode_ = Mode::train;
  std::vector<HiddenBlock> encoder_;
  std::optional<DenseLayer> encoder_out_;
  std::vector<HiddenBlock> decoder_;
  std::optional<DenseLayer> decoder_out_;
  std::vector<HiddenBlock> adversary_;
  std::optional<DenseLayer> adversary_out_;
};

/// Hash of the given tensors' values (FNV-1a over the bit patterns).
std::uint64_t fingerprint(std::span<const Tensor> tensors);

}  // namespace gae
