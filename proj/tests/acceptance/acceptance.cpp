// Acceptance criteria for the library and the command line tool. Prints one
// PASS/FAIL line per criterion and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gae/cli.hpp"
#include "gae/config.hpp"
#include "gae/dataset.hpp"
#include "gae/error.hpp"
#include "gae/gradcheck.hpp"
#include "gae/latent_mcmc.hpp"
#include "gae/metrics.hpp"
#include "gae/model.hpp"
#include "gae/objectives.hpp"
#include "gae/oracle.hpp"
#include "gae/training.hpp"

using namespace gae;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Streams derived from a run seed, as the command line tool does.
enum Stream : std::uint64_t { kInit = 1, kTrain = 2, kSample = 3 };

// ---------------------------------------------------------------------------
// Gradients of the full losses against central differences.

Tensor uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(lo, hi);
  return Tensor::matrix(rows, cols, std::move(v));
}

Tensor normal_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.normal();
  return Tensor::matrix(rows, cols, std::move(v));
}

GradCheckReport check_full_loss(Variant variant) {
  ModelSpec spec;
  spec.variant = variant;
  spec.data_dim = 4;
  spec.latent_dim = 2;
  spec.encoder_hidden = {8, 8};
  spec.decoder_hidden = {8, 8};
  spec.adversary_hidden = {8, 8};
  Rng init(11), draws(12);
  GenerativeAutoencoder model(spec, init);
  const Tensor x = uniform_matrix(4, 4, 0.05, 0.95, draws);
  // Frozen noise: reparameterisation draws, prior samples and a dropout seed.
  const Tensor eps = normal_matrix(4, 2, draws);
  const Tensor prior = normal_matrix(4, 2, draws);
  std::function<Tensor()> loss;
  if (variant == Variant::vae) {
    loss = [&] {
      const VaeEncoding enc = model.encode_vae(x, eps);
      return recon_cross_entropy(x, model.decode(enc.z)) + kl_prior_gaussian(enc.mu, enc.sigma);
    };
  } else {
    loss = [&] {
      const Tensor z = model.encode_aae(x);
      Rng dropout(13);
      const Tensor d_real = model.adversary_score(prior, Mode::train, &dropout);
      const Tensor d_fake = model.adversary_score(z, Mode::train, &dropout);
      const AdversarialLosses adv = adversarial_losses(d_real, d_fake);
      return recon_cross_entropy(x, model.decode(z)) + adv.discriminator + adv.generator;
    };
  }
  std::vector<Tensor> params = model.parameters();
  // Biases feeding batch norm have zero gradient; at a step of 1e-6 the
  // rounding of a loss near 3 already shows up as a 4e-10 numeric slope.
  return finite_diff_check(loss, params, 1e-5);
}

Outcome gradient_oracle() {
  const GradCheckReport vae = check_full_loss(Variant::vae);
  const GradCheckReport aae = check_full_loss(Variant::aae);
  return {vae.max_relative_error < 1e-4 && aae.max_relative_error < 1e-4,
          fmt("max relative error vae %.3g aae %.3g (< 1e-4)", vae.max_relative_error, aae.max_relative_error)};
}

// ---------------------------------------------------------------------------
// Closed-form KL against Monte Carlo.

Outcome kl_closed_form() {
  constexpr std::size_t kDim = 8, kDraws = 1000000;
  Rng rng(21);
  double worst = 0.0;
  for (int config = 0; config < 50; ++config) {
    std::vector<double> mu(kDim), sigma(kDim);
    for (std::size_t i = 0; i < kDim; ++i) {
      mu[i] = rng.uniform(-1.5, 1.5);
      sigma[i] = rng.uniform(0.3, 2.0);
    }
    const double closed = kl_prior_gaussian(Tensor::matrix(1, kDim, mu), Tensor::matrix(1, kDim, sigma)).item();
    // log q(z) - log p(z) at z = mu + sigma * e; the 2 pi terms cancel.
    double log_sigma_sum = 0.0;
    for (double s : sigma) log_sigma_sum += std::log(s);
    double total = 0.0;
    for (std::size_t n = 0; n < kDraws; ++n) {
      double acc = -log_sigma_sum;
      for (std::size_t i = 0; i < kDim; ++i) {
        const double e = rng.normal();
        const double z = mu[i] + sigma[i] * e;
        acc += 0.5 * (z * z - e * e);
      }
      total += acc;
    }
    const double mc = total / static_cast<double>(kDraws);
    worst = std::max(worst, std::abs(mc - closed) / closed);
  }
  return {worst < 0.01, fmt("worst relative error %.3g over 50 configurations (< 0.01)", worst)};
}

// ---------------------------------------------------------------------------
// Chains from a trained VAE move towards the encoded data distribution.

struct TrainedRun {
  GenerativeAutoencoder model;
  Dataset test;
};

TrainedRun train_run(RunConfig config, std::uint64_t seed) {
  config.train.seed = seed;
  auto [train_data, test_data] = load_run_data(config);
  Rng master(seed);
  Rng init = master.derive(kInit);
  Rng rng = master.derive(kTrain);
  GenerativeAutoencoder model(model_spec_for(config, train_data), init);
  train(model, train_data, config.train, rng);
  return {std::move(model), std::move(test_data)};
}

struct ChainGain {
  double step0;
  double step5;
};

ChainGain chain_gain(GenerativeAutoencoder& model, const Dataset& reference, std::uint64_t seed) {
  EvaluationOptions options;
  options.chains = 500;
  options.steps = 5;
  Rng rng = Rng(seed).derive(kSample);
  const MetricsReport report = evaluate_latent_chains(model, reference, options, rng);
  return {report.rows[0].mmd_to_encoded, report.rows[5].mmd_to_encoded};
}

Outcome central_claim() {
  int improved = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrainedRun run = train_run(RunConfig{}, seed);
    const ChainGain g = chain_gain(run.model, run.test, seed);
    improved += g.step5 < g.step0 ? 1 : 0;
    per_seed += g.step5 < g.step0 ? '+' : '-';
  }
  return {improved >= 18, fmt("step-5 MMD below step-0 MMD in %d/20 seeds (>= 18) [%s]", improved, per_seed.c_str())};
}

// The same mixture with every coordinate repeated 16 times. The VAE then
// keeps information in its latent code instead of collapsing onto the prior.
Dataset replicate_columns(const Dataset& data, std::size_t copies) {
  Dataset out = data;
  out.dim = data.dim * copies;
  out.values.clear();
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t k = 0; k < copies; ++k) {
      for (std::size_t j = 0; j < data.dim; ++j) out.values.push_back(data.values[i * data.dim + j]);
    }
  }
  return out;
}

std::string replicated_mixture_info() {
  int improved = 0;
  double ratio_sum = 0.0;
  constexpr int kSeeds = 5;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    RunConfig config;
    auto [train_data, test_data] = load_run_data(config);
    train_data = replicate_columns(train_data, 16);
    test_data = replicate_columns(test_data, 16);
    config.train.seed = seed;
    Rng master(seed);
    Rng init = master.derive(kInit);
    Rng rng = master.derive(kTrain);
    GenerativeAutoencoder model(model_spec_for(config, train_data), init);
    train(model, train_data, config.train, rng);
    const ChainGain g = chain_gain(model, test_data, seed);
    improved += g.step5 < g.step0 ? 1 : 0;
    ratio_sum += g.step0 / g.step5;
  }
  return fmt("32-D replicated mixture: step-5 MMD below step 0 in %d/%d seeds, mean step0/step5 ratio %.2f",
             improved, kSeeds, ratio_sum / kSeeds);
}

// ---------------------------------------------------------------------------
// Linear-Gaussian oracle.

std::vector<OracleCheck> oracle_checks() {
  static const std::vector<OracleCheck> checks = run_oracle_suite(OracleSuiteOptions{});
  return checks;
}

bool is_corruption_check(const OracleCheck& c) { return c.name.rfind("corruption_", 0) == 0; }

Outcome stationary_covariance() {
  bool ok = true;
  std::string detail;
  for (const OracleCheck& c : oracle_checks()) {
    if (is_corruption_check(c)) continue;
    ok = ok && c.passed;
    detail += fmt("%s %.3g (<= %.3g)%s; ", c.name.c_str(), c.value, c.threshold, c.passed ? "" : " FAILED");
  }
  return {ok, detail};
}

bool same_transition(const Transition& a, const Transition& b) {
  return a.x.to_vector() == b.x.to_vector() && a.z.values.to_vector() == b.z.values.to_vector();
}

Outcome corruption_reduction_and_augmentation() {
  bool identical = true;
  // Stochastic (VAE) and deterministic (AAE) encoders, and the oracle.
  for (Variant v : {Variant::vae, Variant::aae}) {
    ModelSpec spec;
    spec.variant = v;
    Rng init(31);
    GenerativeAutoencoder model(spec, init);
    AutoencoderKernel kernel(model);
    Rng z_rng(32);
    const LatentBatch z0 = sample_prior(200, model.prior(), z_rng);
    Rng a(33), b(33);
    identical = identical && same_transition(transition_step(kernel, z0, a),
                                             denoising_transition_step(kernel, z0, CorruptionSpec{0.0}, b));
    identical = identical && a.counter() == b.counter();
  }
  {
    Rng sys_rng(34);
    OracleKernel kernel = wrap_oracle_as_model(random_contractive_system(3, 5, 0.7, 0.5, 0.0, sys_rng));
    Rng z_rng(35);
    const LatentBatch z0 = sample_prior(200, PriorSpec{3}, z_rng);
    Rng a(36), b(36);
    identical = identical && same_transition(transition_step(kernel, z0, a),
                                             denoising_transition_step(kernel, z0, CorruptionSpec{0.0}, b));
  }
  bool ok = identical;
  std::string detail = identical ? "zero variance bit-identical; " : "zero variance differs; ";
  for (const OracleCheck& c : oracle_checks()) {
    if (!is_corruption_check(c)) continue;
    ok = ok && c.passed;
    detail += fmt("%s %.3g (<= %.3g); ", c.name.c_str(), c.value, c.threshold);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// Denoising on held-out data.

Outcome denoising_criterion() {
  int better = 0;
  double recon_sum = 0.0, corrupt_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RunConfig config;
    apply_variant(config, "dvae");
    config.train.corruption.variance = 0.25;
    config.model.corruption_variance = 0.25;
    TrainedRun run = train_run(config, seed);
    Rng rng = Rng(seed).derive(kSample);
    const DenoisingReport r = denoising_errors(run.model, run.test.all(), 0.25, Mode::eval, rng);
    better += r.mean_reconstruction_error() < r.mean_corrupted_error() ? 1 : 0;
    recon_sum += r.mean_reconstruction_error();
    corrupt_sum += r.mean_corrupted_error();
  }
  return {better >= 18, fmt("reconstruction beats corrupted input in %d/20 seeds (>= 18); mean errors %.4f vs %.4f",
                            better, recon_sum / 20, corrupt_sum / 20)};
}

// ---------------------------------------------------------------------------
// Spherical interpolation.

Outcome slerp_properties() {
  Rng rng(41);
  double worst = 0.0;
  bool endpoints = true;
  for (int pair = 0; pair < 100; ++pair) {
    const std::size_t dim = 2 + static_cast<std::size_t>(pair % 7);
    std::vector<double> z1(dim), z2(dim);
    for (auto* z : {&z1, &z2}) {
      double norm = 0.0;
      for (double& v : *z) {
        v = rng.normal();
        norm += v * v;
      }
      for (double& v : *z) v /= std::sqrt(norm);
    }
    endpoints = endpoints && slerp(z1, z2, 0.0) == z1 && slerp(z1, z2, 1.0) == z2;
    for (int k = 0; k < 100; ++k) {
      const double t = k / 99.0;
      const std::vector<double> p = slerp(z1, z2, t);
      double norm = 0.0;
      for (double v : p) norm += v * v;
      worst = std::max(worst, std::abs(std::sqrt(norm) - 1.0));
    }
  }
  return {endpoints && worst <= 1e-9,
          fmt("endpoints %s; worst norm deviation %.3g (<= 1e-9)", endpoints ? "exact" : "NOT exact", worst)};
}

// ---------------------------------------------------------------------------
// Construction gates.

Outcome construction_gates() {
  bool rejected = true;
  for (const auto& hidden : {std::vector<std::size_t>{1}, std::vector<std::size_t>{64, 3}}) {
    ModelSpec spec;
    spec.variant = Variant::aae;
    spec.latent_dim = 4;
    spec.encoder_hidden = hidden;
    Rng init(51);
    try {
      GenerativeAutoencoder model(spec, init);
      rejected = false;
    } catch (const ContractError&) {
    }
  }
  {
    ModelSpec spec;
    spec.variant = Variant::aae;
    spec.data_dim = 2;
    spec.latent_dim = 3;
    spec.encoder_hidden = {};
    Rng init(52);
    try {
      GenerativeAutoencoder model(spec, init);
      rejected = false;
    } catch (const ContractError&) {
    }
  }

  // Large random head weights spread log sigma over roughly [-120, 120].
  std::size_t positive = 0, total = 0;
  Rng rng(53);
  for (int m = 0; m < 100; ++m) {
    ModelSpec spec;
    spec.encoder_hidden = {};
    Rng init(100 + static_cast<std::uint64_t>(m));
    GenerativeAutoencoder model(spec, init);
    for (Tensor& p : model.encoder_parameters()) {
      for (double& w : p.mutable_values()) w = rng.uniform(-40.0, 40.0);
    }
    const Tensor x = uniform_matrix(100, 2, 0.0, 1.0, rng);
    NoGradGuard no_grad;
    const VaeEncoding enc = model.encode_vae(x, rng);
    for (double s : enc.sigma.values()) positive += s > 0.0 && std::isfinite(s) ? 1 : 0;
    total += enc.sigma.size();
  }
  const bool sigma_ok = positive == total && total == 20000;
  return {rejected && sigma_ok, fmt("undercomplete AAE %s; sigma > 0 for %zu/%zu head outputs",
                                    rejected ? "rejected" : "ACCEPTED", positive, total)};
}

// ---------------------------------------------------------------------------
// Command line determinism.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// The manifest's start time is the only time-dependent output.
std::string without_start_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("\"started\"") == std::string::npos) out += line + '\n';
  }
  return out;
}

using Artifacts = std::map<std::string, std::string>;

Artifacts run_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string prefix = (dir / "run").string();
  const std::string ckpt = prefix + ".ckpt";
  const std::vector<std::vector<std::string>> commands = {
      {"--seed", "7", "--out", prefix, "train"},
      {"--seed", "7", "--out", prefix, "sample", "--checkpoint", ckpt, "--trace"},
      {"--seed", "7", "--out", prefix, "evaluate", "--checkpoint", ckpt},
  };
  Artifacts artifacts;
  for (const auto& args : commands) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    artifacts["stdout " + args[4]] = out.str() + err.str() + "exit " + std::to_string(code);
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = fs::relative(entry.path(), dir).string();
    std::string text = slurp(entry.path());
    if (name.ends_with(".manifest.json")) text = without_start_time(text);
    artifacts[name] = std::move(text);
  }
  return artifacts;
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("gae_acceptance_" + std::to_string(::getpid()));
  const Artifacts first = run_pipeline(dir);
  const Artifacts second = run_pipeline(dir);
  fs::remove_all(dir);
  std::string differing;
  for (const auto& [name, text] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != text) differing += " " + name;
  }
  const bool exits_ok = first.at("stdout train").ends_with("exit 0") && first.at("stdout sample").ends_with("exit 0") &&
                        first.at("stdout evaluate").ends_with("exit 0");
  const bool ok = exits_ok && differing.empty() && first.size() == second.size();
  return {ok, fmt("%zu artifacts compared byte for byte; %s", first.size(),
                  !exits_ok ? "a command failed" : differing.empty() ? "all identical" : ("differ:" + differing).c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"A1", "gradient oracle", 10, gradient_oracle},
      {"A2", "closed-form KL", 60, kl_closed_form},
      {"A3", "trained VAE chains approach the encoded distribution", 600, central_claim},
      {"A4", "stationary covariance of the linear-Gaussian chain", 60, stationary_covariance},
      {"A5", "corruption reduction and augmentation", 30, corruption_reduction_and_augmentation},
      {"A6", "denoising on held-out data", 600, denoising_criterion},
      {"A7", "slerp properties", 60, slerp_properties},
      {"A8", "construction gates", 60, construction_gates},
      {"A9", "command line determinism", 600, cli_determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool passed = outcome.passed && in_budget;
    failures += passed ? 0 : 1;
    std::printf("%s %s %s: %s [%.1f s, budget %.0f s]\n", c.id, passed ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
    if (std::string(c.id) == "A3") {
      std::printf("[info] %s\n", replicated_mixture_info().c_str());
      std::fflush(stdout);
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
