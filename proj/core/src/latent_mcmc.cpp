#include "gae/latent_mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gae/error.hpp"

namespace gae {

namespace {

constexpr double kAngleTolerance = 1e-6;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_latent(const MarkovKernel& kernel, const LatentBatch& z) {
  if (z.values.rank() != 2 || z.values.cols() != kernel.latent_dim()) {
    throw ContractError("latent batch of shape " + shape_string(z.values.shape()) +
                        " does not match latent dimension " + std::to_string(kernel.latent_dim()));
  }
}

void check_data(const MarkovKernel& kernel, const Tensor& x) {
  if (x.rank() != 2 || x.cols() != kernel.data_dim()) {
    throw ContractError("decoded batch of shape " + shape_string(x.shape()) +
                        " does not match data dimension " + std::to_string(kernel.data_dim()));
  }
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::prior: return "prior";
    case Provenance::encoded: return "encoded";
    case Provenance::chain: return "chain";
    case Provenance::interpolated: return "interpolated";
  }
  return "unknown";
}

LatentBatch sample_prior(std::size_t n, const PriorSpec& prior, Rng& rng) {
  if (n == 0) throw ContractError("sample_prior: n must be at least 1");
  if (prior.dim == 0) throw ContractError("sample_prior: prior dimension must be at least 1");
  std::vector<double> v(n * prior.dim);
  for (double& x : v) x = rng.normal();
  return {Tensor::matrix(n, prior.dim, std::move(v)), Provenance::prior, 0};
}

std::vector<double> slerp(std::span<const double> z1, std::span<const double> z2, double t) {
  if (z1.size() != z2.size() || z1.empty()) throw ShapeError("slerp: endpoints must have equal, non-zero length");
  if (std::equal(z1.begin(), z1.end(), z2.begin())) return {z1.begin(), z1.end()};
  const double n1 = norm(z1), n2 = norm(z2);
  if (n1 == 0.0 || n2 == 0.0) throw ContractError("slerp: endpoints must be non-zero");
  double dot = 0.0;
  for (std::size_t i = 0; i < z1.size(); ++i) dot += z1[i] * z2[i];
  const double omega = std::acos(std::clamp(dot / (n1 * n2), -1.0, 1.0));
  if (std::numbers::pi - omega < kAngleTolerance) {
    throw DegenerateGeometryError("slerp: endpoints are antipodal, the great circle is undefined");
  }
  double w1, w2;
  if (omega < kAngleTolerance) {
    w1 = 1.0 - t;
    w2 = t;
  } else {
    const double s = std::sin(omega);
    w1 = std::sin((1.0 - t) * omega) / s;
    w2 = std::sin(t * omega) / s;
  }
  std::vector<double> out(z1.size());
  for (std::size_t i = 0; i < z1.size(); ++i) out[i] = w1 * z1[i] + w2 * z2[i];
  return out;
}

LatentBatch interpolation_grid(const std::array<std::vector<double>, 4>& corners, std::size_t rows,
                               std::size_t cols) {
  if (rows < 2 || cols < 2) throw ContractError("interpolation_grid: rows and cols must be at least 2");
  const std::size_t dim = corners[0].size();
  for (const auto& c : corners) {
    if (c.size() != dim || dim == 0) throw ShapeError("interpolation_grid: corners must share a dimension");
  }
  std::vector<double> values;
  values.reserve(rows * cols * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    const double tr = static_cast<double>(r) / static_cast<double>(rows - 1);
    const auto left = slerp(corners[0], corners[2], tr);
    const auto right = slerp(corners[1], corners[3], tr);
    for (std::size_t c = 0; c < cols; ++c) {
      const auto cell = slerp(left, right, static_cast<double>(c) / static_cast<double>(cols - 1));
      values.insert(values.end(), cell.begin(), cell.end());
    }
  }
  return {Tensor::matrix(rows * cols, dim, std::move(values)), Provenance::interpolated, 0};
}

// ---------------------------------------------------------------------------

AutoencoderKernel::AutoencoderKernel(GenerativeAutoencoder& model, KernelOptions options)
    : model_(model), options_(options), previous_mode_(model.norm_mode()) {
  for (const BatchNormLayer* bn : model.batch_norm_layers()) previous_tracking_.push_back(bn->track_running_stats());
  model_.set_norm_mode(options_.norm_mode);
  model_.set_track_running_stats(false);
}

AutoencoderKernel::~AutoencoderKernel() {
  model_.set_norm_mode(previous_mode_);
  auto layers = model_.batch_norm_layers();
  for (std::size_t i = 0; i < layers.size() && i < previous_tracking_.size(); ++i) {
    layers[i]->set_track_running_stats(previous_tracking_[i]);
  }
}

Tensor AutoencoderKernel::decode(const Tensor& z, Rng&) {
  NoGradGuard no_grad;
  return model_.decode(z);
}

Tensor AutoencoderKernel::encode(const Tensor& x, Rng& rng) {
  NoGradGuard no_grad;
  if (model_.variant() == Variant::aae) return model_.encode_aae(x);
  if (options_.encoder_mean) return slice(model_.encoder_head(x), 0, model_.latent_dim());
  return model_.encode_vae(x, rng).z;
}

// ---------------------------------------------------------------------------

Transition transition_step(MarkovKernel& kernel, const LatentBatch& z_t, Rng& rng) {
  check_latent(kernel, z_t);
  Tensor x = kernel.decode(z_t.values, rng);
  check_data(kernel, x);
  Tensor z = kernel.encode(x, rng);
  return {x, std::nullopt, {z, Provenance::chain, z_t.provenance == Provenance::chain ? z_t.step + 1 : 1}};
}

Transition denoising_transition_step(MarkovKernel& kernel, const LatentBatch& z_t,
                                     const CorruptionSpec& corruption, Rng& rng) {
  check_latent(kernel, z_t);
  Tensor x = kernel.decode(z_t.values, rng);
  check_data(kernel, x);
  Tensor x_tilde = corrupt(x, corruption, rng);
  Tensor z = kernel.encode(x_tilde, rng);
  return {x, x_tilde, {z, Provenance::chain, z_t.provenance == Provenance::chain ? z_t.step + 1 : 1}};
}

const LatentBatch& ChainTrace::latent(std::size_t t) const {
  if (t > steps.size()) throw ContractError("ChainTrace::latent: step beyond the end of the trace");
  return t == 0 ? initial : steps[t - 1].z;
}

ChainTrace run_chain(MarkovKernel& kernel, const LatentBatch& z0, std::size_t steps, bool denoising,
                     const CorruptionSpec& corruption, Rng& rng) {
  check_latent(kernel, z0);
  const std::uint64_t before = kernel.fingerprint();
  ChainTrace trace{z0, {}, {steps, denoising, corruption, kernel.norm_mode()}};
  trace.steps.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const LatentBatch& current = trace.latent(t);
    Transition next = denoising ? denoising_transition_step(kernel, current, corruption, rng)
                                : transition_step(kernel, current, rng);
    next.z.step = t + 1;
    trace.steps.push_back(std::move(next));
  }
  if (kernel.fingerprint() != before) {
    throw ContractError("run_chain: kernel parameters changed during sampling");
  }
  return trace;
}

}  // namespace gae
