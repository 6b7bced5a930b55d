#include "gae/training.hpp"

#include <cstdio>
#include <numeric>

#include "gae/error.hpp"

namespace gae {

namespace {

std::vector<Tensor> concat_params(std::vector<Tensor> a, const std::vector<Tensor>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Tensor prior_batch(std::size_t n, std::size_t dim, Rng& rng) {
  std::vector<double> v(n * dim);
  for (double& x : v) x = rng.normal();
  return Tensor::matrix(n, dim, std::move(v));
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

Trainer::Trainer(GenerativeAutoencoder& model, TrainConfig config)
    : model_(model),
      config_(config),
      autoencoder_opt_(concat_params(model.encoder_parameters(), model.decoder_parameters()), config.adam) {
  if (config_.denoising != model.spec().denoising) {
    throw ContractError("Trainer: config denoising flag does not match the model variant");
  }
  if (config_.epochs == 0 || config_.batch_size == 0) {
    throw ContractError("Trainer: epochs and batch_size must be positive");
  }
  if (model.variant() == Variant::aae) {
    adversary_opt_.emplace(model.adversary_parameters(), config.adam);
    generator_opt_.emplace(model.encoder_parameters(), config.adam);
  }
}

Tensor Trainer::reconstruction_loss(const Tensor& x, const Tensor& x_hat) const {
  return config_.reconstruction_loss == ReconstructionLoss::cross_entropy ? recon_cross_entropy(x, x_hat)
                                                                          : recon_squared_error(x, x_hat);
}

Tensor Trainer::encoder_input(const Tensor& x_clean, Rng& rng) const {
  return config_.denoising ? corrupt(x_clean, config_.corruption, rng) : x_clean;
}

Trainer::VaeLosses Trainer::vae_step(const Tensor& x_clean, const Tensor& x_input, Rng& rng) {
  VaeEncoding enc = model_.encode_vae(x_input, rng);
  Tensor recon = reconstruction_loss(x_clean, model_.decode(enc.z));
  Tensor kl = kl_prior_gaussian(enc.mu, enc.sigma);
  autoencoder_opt_.zero_grad();
  (recon + kl).backward();
  autoencoder_opt_.step();
  return {recon.item(), kl.item()};
}

double Trainer::reconstruction_step(const Tensor& x_clean, const Tensor& x_input) {
  Tensor recon = reconstruction_loss(x_clean, model_.decode(model_.encode_aae(x_input)));
  autoencoder_opt_.zero_grad();
  recon.backward();
  autoencoder_opt_.step();
  return recon.item();
}

double Trainer::discriminator_step(const Tensor& x_input, Rng& rng) {
  Tensor z_fake;
  {
    NoGradGuard no_grad;
    z_fake = model_.encode_aae(x_input);
  }
  Tensor z_real = prior_batch(x_input.rows(), model_.latent_dim(), rng);
  Tensor d_real = model_.adversary_score(z_real, Mode::train, &rng);
  Tensor d_fake = model_.adversary_score(z_fake, Mode::train, &rng);
  Tensor loss = adversarial_losses(d_real, d_fake).discriminator;
  adversary_opt_->zero_grad();
  loss.backward();
  adversary_opt_->step();
  return loss.item();
}

double Trainer::generator_step(const Tensor& x_input, Rng& rng) {
  Tensor d_fake = model_.adversary_score(model_.encode_aae(x_input), Mode::train, &rng);
  Tensor loss = generator_loss(d_fake);
  generator_opt_->zero_grad();
  loss.backward();
  generator_opt_->step();
  return loss.item();
}

EpochStats Trainer::train_epoch(const Dataset& data, Rng& rng) {
  const std::size_t n = data.size();
  if (n == 0) throw ContractError("train_epoch: empty dataset");
  if (data.dim != model_.data_dim()) throw ContractError("train_epoch: dataset dimension mismatch");
  if (config_.batch_size > n) throw ContractError("train_epoch: batch_size exceeds dataset size");
  model_.set_norm_mode(Mode::train);
  model_.set_track_running_stats(true);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);

  const std::size_t batches = n / config_.batch_size;
  double recon = 0.0, prior = 0.0, disc = 0.0, gen = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    std::span<const std::size_t> idx(order.data() + b * config_.batch_size, config_.batch_size);
    Tensor x = data.rows(idx);
    Tensor x_in = encoder_input(x, rng);
    if (model_.variant() == Variant::vae) {
      VaeLosses l = vae_step(x, x_in, rng);
      recon += l.recon;
      prior += l.kl;
    } else {
      recon += reconstruction_step(x, x_in);
      disc += discriminator_step(x_in, rng);
      gen += generator_step(x_in, rng);
    }
  }
  const double nb = static_cast<double>(batches);
  EpochStats stats;
  stats.epoch = ++epochs_;
  stats.recon_loss = recon / nb;
  if (model_.variant() == Variant::vae) {
    stats.prior_loss = prior / nb;
  } else {
    stats.disc_loss = disc / nb;
    stats.gen_loss = gen / nb;
  }
  return stats;
}

std::vector<EpochStats> train(GenerativeAutoencoder& model, const Dataset& data, const TrainConfig& config,
                              Rng& rng, const std::function<void(const EpochStats&)>& on_epoch) {
  Trainer trainer(model, config);
  std::vector<EpochStats> history;
  for (std::size_t e = 0; e < config.epochs; ++e) {
    history.push_back(trainer.train_epoch(data, rng));
    if (on_epoch) on_epoch(history.back());
  }
  return history;
}

std::string epoch_csv_header() { return "epoch,recon_loss,prior_loss,disc_loss,gen_loss"; }

std::string epoch_csv_row(const EpochStats& s) {
  return std::to_string(s.epoch) + "," + format_optional(s.recon_loss) + "," + format_optional(s.prior_loss) +
         "," + format_optional(s.disc_loss) + "," + format_optional(s.gen_loss);
}

}  // namespace gae
