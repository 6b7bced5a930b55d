#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gae/dataset.hpp"
#include "gae/model.hpp"
#include "gae/objectives.hpp"
#include "gae/optim.hpp"
#include "gae/rng.hpp"

namespace gae {

enum class ReconstructionLoss { cross_entropy, squared_error };

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  AdamOptions adam{};
  std::uint64_t seed = 0;
  bool denoising = false;
  CorruptionSpec corruption{};
  ReconstructionLoss reconstruction_loss = ReconstructionLoss::cross_entropy;
};

/// Mean per-batch losses over one epoch. Terms that do not apply to the
/// model variant are empty.
struct EpochStats {
  std::size_t epoch = 0;
  double recon_loss = 0.0;
  std::optional<double> prior_loss;
  std::optional<double> disc_loss;
  std::optional<double> gen_loss;
};

/// Owns the optimizer state for one model across epochs.
///
/// VAE: one Adam step per batch on reconstruction + KL prior loss.
/// AAE: per batch, (i) reconstruction step on encoder and decoder, (ii)
/// discriminator step on the adversary, (iii) generator step on the encoder.
/// Denoising variants feed corrupt(x) to the encoder and reconstruct the
/// clean x; the same corrupted batch is used by all three AAE phases.
class Trainer {
 public:
  Trainer(GenerativeAutoencoder& model, TrainConfig config);

  EpochStats train_epoch(const Dataset& data, Rng& rng);

  struct VaeLosses {
    double recon;
    double kl;
  };
  VaeLosses vae_step(const Tensor& x_clean, const Tensor& x_input, Rng& rng);
  double reconstruction_step(const Tensor& x_clean, const Tensor& x_input);
  double discriminator_step(const Tensor& x_input, Rng& rng);
  double generator_step(const Tensor& x_input, Rng& rng);

  /// The encoder input for a clean batch: corrupt(x) when denoising.
  Tensor encoder_input(const Tensor& x_clean, Rng& rng) const;

  Tensor reconstruction_loss(const Tensor& x, const Tensor& x_hat) const;

  std::size_t epochs_completed() const noexcept { return epochs_; }
  const TrainConfig& config() const noexcept { return config_; }

 private:
  GenerativeAutoencoder& model_;
  TrainConfig config_;
  std::size_t epochs_ = 0;
  Adam autoencoder_opt_;
  std::optional<Adam> adversary_opt_;
  std::optional<Adam> generator_opt_;
};

/// Runs config.epochs epochs; `on_epoch` sees each epoch's statistics.
std::vector<EpochStats> train(GenerativeAutoencoder& model, const Dataset& data,
                              const TrainConfig& config, Rng& rng,
                              const std::function<void(const EpochStats&)>& on_epoch = {});

std::string epoch_csv_header();
std::string epoch_csv_row(const EpochStats& stats);

}  // namespace gae
