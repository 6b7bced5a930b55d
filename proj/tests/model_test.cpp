#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gae/error.hpp"
#include "gae/layers.hpp"
#include "gae/model.hpp"
#include "gae/objectives.hpp"
#include "gae/training.hpp"
#include "gae/dataset.hpp"

using namespace gae;

namespace {

ModelSpec small_spec(Variant v, std::size_t a = 4, std::size_t b = 2) {
  ModelSpec s;
  s.variant = v;
  s.data_dim = a;
  s.latent_dim = b;
  s.encoder_hidden = {8};
  s.decoder_hidden = {8};
  s.adversary_hidden = {8};
  return s;
}

Tensor random_batch(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<double> v(n * d);
  for (double& x : v) x = rng.uniform();
  return Tensor::matrix(n, d, std::move(v));
}

void zero(Tensor t) {
  for (double& v : t.mutable_values()) v = 0.0;
}

}  // namespace

TEST(EncodeVae, ZeroNoiseGivesMean) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  const Tensor x = random_batch(5, 4, data);
  const auto enc = m.encode_vae(x, Tensor::zeros({5, 2}));
  EXPECT_EQ(enc.z.to_vector(), enc.mu.to_vector());
}

TEST(EncodeVae, ZeroLogSigmaGivesUnitSigma) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  // Zero the log-sigma rows of the head weight and bias.
  auto params = m.encoder_parameters();
  Tensor w = params[params.size() - 2], bias = params.back();
  auto wv = w.mutable_values();
  for (std::size_t r = 2; r < 4; ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) wv[r * w.cols() + c] = 0.0;
  zero(bias);
  const auto enc = m.encode_vae(random_batch(3, 4, data), data);
  for (double s : enc.sigma.values()) EXPECT_EQ(s, 1.0);
}

TEST(EncodeVae, EqualSeedsGiveEqualDraws) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  const Tensor x = random_batch(6, 4, data);
  Rng r1(9), r2(9);
  EXPECT_EQ(m.encode_vae(x, r1).z.to_vector(), m.encode_vae(x, r2).z.to_vector());
}

TEST(EncodeVae, ReparameterisationIdentity) {
  Rng init(3), data(4);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  const Tensor x = random_batch(4, 4, data);
  const Tensor eps = random_batch(4, 2, data);
  const auto enc = m.encode_vae(x, eps);
  for (std::size_t i = 0; i < enc.z.size(); ++i) {
    EXPECT_DOUBLE_EQ(enc.z[i], enc.mu[i] + eps[i] * enc.sigma[i]);
  }
}

TEST(EncodeVae, WrongVariantIsContractError) {
  Rng init(1);
  GenerativeAutoencoder aae(small_spec(Variant::aae), init);
  Rng r(0);
  EXPECT_THROW(aae.encode_vae(Tensor::zeros({1, 4}), r), ContractError);
  GenerativeAutoencoder vae(small_spec(Variant::vae), init);
  EXPECT_THROW(vae.encode_aae(Tensor::zeros({1, 4})), ContractError);
  EXPECT_THROW(vae.adversary_score(Tensor::zeros({1, 2}), Mode::eval, nullptr), ContractError);
}

TEST(EncodeAae, DeterministicAndOrderPreserving) {
  Rng init(5), data(6);
  GenerativeAutoencoder m(small_spec(Variant::aae), init);
  const Tensor x = random_batch(7, 4, data);
  const Tensor z1 = m.encode_aae(x);
  const Tensor z2 = m.encode_aae(x);
  EXPECT_EQ(z1.to_vector(), z2.to_vector());
  ASSERT_EQ(z1.rows(), 7u);
  // Eval-mode batch norm makes each row a function of that row alone.
  m.set_norm_mode(Mode::eval);
  const Tensor all = m.encode_aae(x);
  for (std::size_t i = 0; i < 7; ++i) {
    const Tensor row = m.encode_aae(Tensor::matrix(1, 4, {x.at(i, 0), x.at(i, 1), x.at(i, 2), x.at(i, 3)}));
    EXPECT_DOUBLE_EQ(row.at(0, 0), all.at(i, 0));
    EXPECT_DOUBLE_EQ(row.at(0, 1), all.at(i, 1));
  }
}

TEST(EncodeAae, SingleLinearLayerIsAffineMap) {
  ModelSpec s = small_spec(Variant::aae, 3, 2);
  s.encoder_hidden = {};
  Rng init(7);
  GenerativeAutoencoder m(s, init);
  auto p = m.encoder_parameters();
  ASSERT_EQ(p.size(), 2u);
  const std::vector<double> W{1.0, -2.0, 0.5, 0.25, 3.0, -1.0};
  const std::vector<double> b{0.1, -0.2};
  std::copy(W.begin(), W.end(), p[0].mutable_values().begin());
  std::copy(b.begin(), b.end(), p[1].mutable_values().begin());
  const Tensor z = m.encode_aae(Tensor::matrix(1, 3, {2.0, 1.0, 4.0}));
  // Hand evaluation of W x + b.
  EXPECT_DOUBLE_EQ(z.at(0, 0), 1.0 * 2 - 2.0 * 1 + 0.5 * 4 + 0.1);
  EXPECT_DOUBLE_EQ(z.at(0, 1), 0.25 * 2 + 3.0 * 1 - 1.0 * 4 - 0.2);
}

TEST(Decode, ZeroPreActivationGivesHalf) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  auto p = m.decoder_parameters();
  zero(p[p.size() - 2]);
  zero(p.back());
  const Tensor out = m.decode(random_batch(3, 2, data));
  for (double v : out.values()) EXPECT_EQ(v, 0.5);
}

TEST(Decode, DeterministicInsideUnitInterval) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  std::vector<double> big(6 * 2);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = (i % 2 ? 1 : -1) * 50.0 * static_cast<double>(i);
  const Tensor z = Tensor::matrix(6, 2, big);
  const Tensor a = m.decode(z), b = m.decode(z);
  EXPECT_EQ(a.to_vector(), b.to_vector());
  for (double v : a.values()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_THROW(m.decode(Tensor::zeros({2, 3})), ContractError);
}

TEST(Decode, TrainedModelBeatsUntrainedBaseline) {
  // An AAE: its deterministic code cannot collapse onto the prior, so
  // training has to improve held-out reconstructions.
  const Dataset all = gen_gaussian_mixture(1200, {}, 11);
  const auto [train_set, held_out] = split_dataset(all, 1000);
  ModelSpec s = small_spec(Variant::aae, 2, 2);
  s.encoder_hidden = {32, 32};
  s.decoder_hidden = {32, 32};
  s.adversary_hidden = {32};
  Rng init_a(3), init_b(3);
  GenerativeAutoencoder trained(s, init_a), baseline(s, init_b);
  TrainConfig tc;
  tc.epochs = 5;
  tc.adam.alpha = 1e-3;
  Rng rng(4);
  train(trained, train_set, tc, rng);
  auto held_loss = [&](GenerativeAutoencoder& m) {
    NoGradGuard guard;
    m.set_norm_mode(Mode::eval);
    const Tensor x = held_out.all();
    return recon_cross_entropy(x, m.decode(m.encode_aae(x))).item();
  };
  const double before = held_loss(baseline), after = held_loss(trained);
  EXPECT_LT(after, before - 0.01) << before << " -> " << after;
}

TEST(Adversary, ZeroPreActivationGivesHalf) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::aae), init);
  auto p = m.adversary_parameters();
  zero(p[p.size() - 2]);
  zero(p.back());
  const Tensor s = m.adversary_score(random_batch(4, 2, data), Mode::eval, nullptr);
  ASSERT_EQ(s.rows(), 4u);
  for (double v : s.values()) EXPECT_EQ(v, 0.5);
}

TEST(Adversary, EvalIsDeterministicAndTrainIsSeeded) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::aae), init);
  const Tensor z = random_batch(16, 2, data);
  EXPECT_EQ(m.adversary_score(z, Mode::eval, nullptr).to_vector(),
            m.adversary_score(z, Mode::eval, nullptr).to_vector());
  Rng a(8), b(8), c(9);
  const auto sa = m.adversary_score(z, Mode::train, &a).to_vector();
  EXPECT_EQ(sa, m.adversary_score(z, Mode::train, &b).to_vector());
  EXPECT_NE(sa, m.adversary_score(z, Mode::train, &c).to_vector());
  for (double v : sa) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(NormMode, EvalOutputsIgnoreBatchComposition) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::aae), init);
  m.set_norm_mode(Mode::eval);
  const Tensor x1 = random_batch(5, 4, data);
  Tensor x2 = random_batch(5, 4, data);
  auto row0 = [](const Tensor& t) { return std::vector<double>{t.at(0, 0), t.at(0, 1)}; };
  // Put x1's first row into a different batch.
  std::vector<double> v = x2.to_vector();
  for (std::size_t c = 0; c < 4; ++c) v[c] = x1.at(0, c);
  x2 = Tensor::matrix(5, 4, v);
  EXPECT_EQ(row0(m.encode_aae(x1)), row0(m.encode_aae(x2)));
}

TEST(NormMode, TrainOutputsDependOnBatchComposition) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::aae), init);
  m.set_norm_mode(Mode::train);
  m.set_track_running_stats(false);
  const Tensor x1 = random_batch(5, 4, data);
  std::vector<double> v = random_batch(5, 4, data).to_vector();
  for (std::size_t c = 0; c < 4; ++c) v[c] = x1.at(0, c);
  const Tensor x2 = Tensor::matrix(5, 4, v);
  EXPECT_NE(m.encode_aae(x1).at(0, 0), m.encode_aae(x2).at(0, 0));
}

TEST(NormMode, RoundTripPreservesRunningStatistics) {
  Rng init(1), data(2);
  GenerativeAutoencoder m(small_spec(Variant::vae), init);
  m.set_norm_mode(Mode::train);
  m.decode(random_batch(8, 2, data));
  const auto before = m.fingerprint();
  m.set_norm_mode(Mode::eval);
  m.set_norm_mode(Mode::train);
  EXPECT_EQ(m.fingerprint(), before);
  for (const BatchNormLayer* bn : m.batch_norm_layers()) EXPECT_EQ(bn->mode(), Mode::train);
}

TEST(BatchNorm, TrainOutputIsStandardisedPerFeature) {
  Rng rng(12);
  BatchNormLayer bn(3);
  std::vector<double> v(32 * 3);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.normal() * (1.0 + i % 3) + 5.0 * (i % 3);
  const Tensor y = bn.forward(Tensor::matrix(32, 3, v));  // gamma 1, beta 0
  for (std::size_t c = 0; c < 3; ++c) {
    double xm = 0, xv = 0;
    for (std::size_t r = 0; r < 32; ++r) xm += v[r * 3 + c];
    xm /= 32;
    for (std::size_t r = 0; r < 32; ++r) xv += (v[r * 3 + c] - xm) * (v[r * 3 + c] - xm);
    xv /= 32;
    double m = 0, s2 = 0;
    for (std::size_t r = 0; r < 32; ++r) m += y.at(r, c);
    m /= 32;
    for (std::size_t r = 0; r < 32; ++r) s2 += (y.at(r, c) - m) * (y.at(r, c) - m);
    s2 /= 32;
    EXPECT_NEAR(m, 0.0, 1e-6);
    // Exactly var / (var + epsilon); within 1e-6 of 1 once epsilon is removed.
    EXPECT_NEAR(s2, xv / (xv + 1e-5), 1e-12);
    EXPECT_NEAR(s2 * (xv + 1e-5) / xv, 1.0, 1e-6);
  }
}

TEST(BatchNorm, RunningStatisticsFollowMomentum) {
  BatchNormLayer bn(1, {0.1, 1e-5});
  bn.forward(Tensor::matrix(2, 1, {1.0, 3.0}));  // mean 2, biased var 1
  EXPECT_DOUBLE_EQ(bn.running_mean()[0], 0.9 * 0.0 + 0.1 * 2.0);
  bn.set_track_running_stats(false);
  bn.forward(Tensor::matrix(2, 1, {10.0, 30.0}));
  EXPECT_DOUBLE_EQ(bn.running_mean()[0], 0.2);
}

TEST(ConstructionGate, UndercompleteAaeIsRejected) {
  Rng init(0);
  ModelSpec s = small_spec(Variant::aae, 6, 4);
  s.encoder_hidden = {8, 3};
  EXPECT_THROW(GenerativeAutoencoder(s, init), ContractError);
  s.encoder_hidden = {};
  s.data_dim = 3;
  EXPECT_THROW(GenerativeAutoencoder(s, init), ContractError);
  s.encoder_hidden = {4};
  EXPECT_NO_THROW(GenerativeAutoencoder(s, init));
  // The VAE head has its own 2b outputs and is not gated.
  s.variant = Variant::vae;
  s.encoder_hidden = {1};
  EXPECT_NO_THROW(GenerativeAutoencoder(s, init));
}

TEST(ConstructionGate, VaeSigmaIsStrictlyPositive) {
  ModelSpec s = small_spec(Variant::vae, 3, 2);
  s.encoder_hidden = {};
  Rng init(0), rng(1);
  GenerativeAutoencoder m(s, init);
  auto p = m.encoder_parameters();
  // Large random head weights push log sigma far negative and positive.
  for (double& w : p[0].mutable_values()) w = rng.uniform(-40, 40);
  for (double& w : p[1].mutable_values()) w = rng.uniform(-40, 40);
  const Tensor x = random_batch(10000, 3, rng);
  const auto enc = m.encode_vae(x, rng);
  for (double v : enc.sigma.values()) ASSERT_GT(v, 0.0);
}

TEST(Parameters, GroupsPartitionTheModel) {
  Rng init(0);
  GenerativeAutoencoder m(small_spec(Variant::aae), init);
  EXPECT_EQ(m.parameters().size(),
            m.encoder_parameters().size() + m.decoder_parameters().size() + m.adversary_parameters().size());
  for (const Tensor& t : m.parameters()) EXPECT_TRUE(t.is_leaf());
}
