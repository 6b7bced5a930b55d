#include "gae/model.hpp"

#include <bit>
#include <cmath>

#include "gae/error.hpp"

namespace gae {

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

void hash_values(std::uint64_t& h, std::span<const double> values) {
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFFu;
      h *= kFnvPrime;
    }
  }
}

std::vector<HiddenBlock> build_stack(std::size_t in, const std::vector<std::size_t>& widths,
                                     bool with_norm, Activation act, double dropout,
                                     const ModelSpec& spec, Rng& init) {
  std::vector<HiddenBlock> blocks;
  for (std::size_t w : widths) {
    HiddenBlock block{DenseLayer(in, w, act, init, spec.leaky_slope), std::nullopt, Dropout(dropout)};
    if (with_norm) block.norm.emplace(w, spec.batch_norm);
    blocks.push_back(std::move(block));
    in = w;
  }
  return blocks;
}

Tensor run_block(HiddenBlock& block, const Tensor& x, Mode dropout_mode, Rng* rng) {
  if (!block.norm) return block.dropout.forward(block.linear.forward(x), dropout_mode, rng);
  // Normalise the pre-activation, then apply the nonlinearity.
  const DenseLayer& l = block.linear;
  Tensor pre = matmul(x, transpose(l.weight())) + l.bias();
  return block.dropout.forward(activate(block.norm->forward(pre), l.activation(), l.leaky_slope()),
                               dropout_mode, rng);
}

void append_block_params(std::vector<Tensor>& out, const HiddenBlock& b) {
  out.push_back(b.linear.weight());
  out.push_back(b.linear.bias());
  if (b.norm) {
    out.push_back(b.norm->gamma());
    out.push_back(b.norm->beta());
  }
}

}  // namespace

std::string_view variant_name(Variant v) { return v == Variant::vae ? "vae" : "aae"; }

std::uint64_t fingerprint(std::span<const Tensor> tensors) {
  std::uint64_t h = kFnvOffset;
  for (const Tensor& t : tensors) hash_values(h, t.values());
  return h;
}

GenerativeAutoencoder::GenerativeAutoencoder(ModelSpec spec, Rng& init) : spec_(std::move(spec)) {
  const ModelSpec& s = spec_;
  if (s.data_dim == 0 || s.latent_dim == 0) {
    throw ContractError("GenerativeAutoencoder: data_dim and latent_dim must be at least 1");
  }
  if (!(s.corruption_variance >= 0.0) || !std::isfinite(s.corruption_variance)) {
    throw ContractError("GenerativeAutoencoder: corruption variance must be finite and >= 0");
  }
  const std::size_t bases = s.encoder_hidden.empty() ? s.data_dim : s.encoder_hidden.back();
  if (s.variant == Variant::aae && bases < s.latent_dim) {
    throw ContractError("GenerativeAutoencoder: AAE encoder output layer has " + std::to_string(bases) +
                        " input features for a " + std::to_string(s.latent_dim) +
                        "-dimensional latent space (undercomplete set of bases)");
  }

  encoder_ = build_stack(s.data_dim, s.encoder_hidden, true, Activation::relu, 0.0, s, init);
  const std::size_t head = s.variant == Variant::vae ? 2 * s.latent_dim : s.latent_dim;
  encoder_out_.emplace(bases, head, Activation::none, init);

  decoder_ = build_stack(s.latent_dim, s.decoder_hidden, true, Activation::relu, 0.0, s, init);
  const std::size_t dec_in = s.decoder_hidden.empty() ? s.latent_dim : s.decoder_hidden.back();
  decoder_out_.emplace(dec_in, s.data_dim, Activation::sigmoid, init);

  if (s.variant == Variant::aae) {
    adversary_ = build_stack(s.latent_dim, s.adversary_hidden, false, Activation::leaky_relu, s.dropout,
                             s, init);
    const std::size_t adv_in = s.adversary_hidden.empty() ? s.latent_dim : s.adversary_hidden.back();
    adversary_out_.emplace(adv_in, 1, Activation::sigmoid, init);
  }
}

void GenerativeAutoencoder::check_input(const Tensor& t, std::size_t width, std::string_view what) const {
  if (t.rank() != 2 || t.cols() != width) {
    throw ContractError(std::string(what) + ": expected shape (n, " + std::to_string(width) + "), got " +
                        shape_string(t.shape()));
  }
}

Tensor GenerativeAutoencoder::run_encoder_trunk(const Tensor& x) {
  Tensor h = x;
  for (HiddenBlock& b : encoder_) h = run_block(b, h, Mode::eval, nullptr);
  return h;
}

Tensor GenerativeAutoencoder::encoder_head(const Tensor& x) {
  check_input(x, spec_.data_dim, "encoder");
  return encoder_out_->forward(run_encoder_trunk(x));
}

VaeEncoding GenerativeAutoencoder::encode_vae(const Tensor& x, Rng& rng) {
  if (spec_.variant != Variant::vae) throw ContractError("encode_vae called on an AAE");
  std::vector<double> noise(x.rows() * spec_.latent_dim);
  for (double& e : noise) e = rng.normal();
  return encode_vae(x, Tensor::matrix(x.rows(), spec_.latent_dim, std::move(noise)));
}

VaeEncoding GenerativeAutoencoder::encode_vae(const Tensor& x, const Tensor& noise) {
  if (spec_.variant != Variant::vae) throw ContractError("encode_vae called on an AAE");
  check_input(noise, spec_.latent_dim, "encode_vae noise");
  if (noise.rows() != x.rows()) throw ContractError("encode_vae: noise rows must match the batch");
  Tensor head = encoder_head(x);
  const std::size_t b = spec_.latent_dim;
  Tensor mu = slice(head, 0, b);
  Tensor sigma = exp(slice(head, b, 2 * b));
  Tensor z = mu + noise * sigma;
  return {z, mu, sigma};
}

Tensor GenerativeAutoencoder::encode_aae(const Tensor& x) {
  if (spec_.variant != Variant::aae) throw ContractError("encode_aae called on a VAE");
  return encoder_head(x);
}

Tensor GenerativeAutoencoder::decode(const Tensor& z) {
  check_input(z, spec_.latent_dim, "decode");
  Tensor h = z;
  for (HiddenBlock& b : decoder_) h = run_block(b, h, Mode::eval, nullptr);
  return decoder_out_->forward(h);
}

Tensor GenerativeAutoencoder::adversary_score(const Tensor& z, Mode mode, Rng* rng) {
  if (!adversary_out_) throw ContractError("adversary_score: model has no adversary");
  check_input(z, spec_.latent_dim, "adversary_score");
  Tensor h = z;
  for (HiddenBlock& b : adversary_) h = run_block(b, h, mode, rng);
  return adversary_out_->forward(h);
}

void GenerativeAutoencoder::set_norm_mode(Mode mode) {
  norm_mode_ = mode;
  for (BatchNormLayer* bn : batch_norm_layers()) bn->set_mode(mode);
}

void GenerativeAutoencoder::set_track_running_stats(bool track) {
  for (BatchNormLayer* bn : batch_norm_layers()) bn->set_track_running_stats(track);
}

std::vector<Tensor> GenerativeAutoencoder::encoder_parameters() const {
  std::vector<Tensor> out;
  for (const HiddenBlock& b : encoder_) append_block_params(out, b);
  out.push_back(encoder_out_->weight());
  out.push_back(encoder_out_->bias());
  return out;
}

std::vector<Tensor> GenerativeAutoencoder::decoder_parameters() const {
  std::vector<Tensor> out;
  for (const HiddenBlock& b : decoder_) append_block_params(out, b);
  out.push_back(decoder_out_->weight());
  out.push_back(decoder_out_->bias());
  return out;
}

std::vector<Tensor> GenerativeAutoencoder::adversary_parameters() const {
  std::vector<Tensor> out;
  if (!adversary_out_) return out;
  for (const HiddenBlock& b : adversary_) append_block_params(out, b);
  out.push_back(adversary_out_->weight());
  out.push_back(adversary_out_->bias());
  return out;
}

std::vector<Tensor> GenerativeAutoencoder::parameters() const {
  std::vector<Tensor> out = encoder_parameters();
  for (auto& t : decoder_parameters()) out.push_back(t);
  for (auto& t : adversary_parameters()) out.push_back(t);
  return out;
}

std::vector<BatchNormLayer*> GenerativeAutoencoder::batch_norm_layers() {
  std::vector<BatchNormLayer*> out;
  for (auto* stack : {&encoder_, &decoder_, &adversary_})
    for (HiddenBlock& b : *stack)
      if (b.norm) out.push_back(&*b.norm);
  return out;
}

std::vector<const BatchNormLayer*> GenerativeAutoencoder::batch_norm_layers() const {
  std::vector<const BatchNormLayer*> out;
  for (auto* stack : {&encoder_, &decoder_, &adversary_})
    for (const HiddenBlock& b : *stack)
      if (b.norm) out.push_back(&*b.norm);
  return out;
}

std::uint64_t GenerativeAutoencoder::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  for (const Tensor& t : parameters()) hash_values(h, t.values());
  for (const BatchNormLayer* bn : batch_norm_layers()) {
    hash_values(h, bn->running_mean());
    hash_values(h, bn->running_var());
  }
  return h;
}

}  // namespace gae
