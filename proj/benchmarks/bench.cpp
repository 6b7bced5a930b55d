#include <benchmark/benchmark.h>

#include <vector>

#include <Eigen/Dense>

#include "gae/dataset.hpp"
#include "gae/latent_mcmc.hpp"
#include "gae/metrics.hpp"
#include "gae/model.hpp"
#include "gae/training.hpp"

using namespace gae;

namespace {

Tensor random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.normal();
  return Tensor::matrix(rows, cols, std::move(v));
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Tensor a = random_matrix(n, n, rng), b = random_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128);

void BM_TrainStep(benchmark::State& state) {
  ModelSpec spec;
  spec.variant = state.range(0) == 0 ? Variant::vae : Variant::aae;
  Rng init(2), rng(3);
  GenerativeAutoencoder model(spec, init);
  Trainer trainer(model, TrainConfig{});
  const Tensor x = gen_gaussian_mixture(64, {}, 4).all();
  for (auto _ : state) {
    if (spec.variant == Variant::vae) {
      benchmark::DoNotOptimize(trainer.vae_step(x, x, rng));
    } else {
      trainer.reconstruction_step(x, x);
      trainer.discriminator_step(x, rng);
      benchmark::DoNotOptimize(trainer.generator_step(x, rng));
    }
  }
  state.SetLabel(spec.variant == Variant::vae ? "vae" : "aae");
}
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(1);

void BM_TransitionStep(benchmark::State& state) {
  ModelSpec spec;
  Rng init(5), rng(6);
  GenerativeAutoencoder model(spec, init);
  AutoencoderKernel kernel(model);
  const LatentBatch z0 = sample_prior(static_cast<std::size_t>(state.range(0)), model.prior(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(transition_step(kernel, z0, rng));
}
BENCHMARK(BM_TransitionStep)->Arg(500);

void BM_Mmd(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(7);
  Eigen::MatrixXd a(n, 2), b(n, 2);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) = rng.normal();
    b(i) = rng.normal() + 0.5;
  }
  for (auto _ : state) benchmark::DoNotOptimize(mmd_rbf(a, b));
}
BENCHMARK(BM_Mmd)->Arg(500)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
