#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "gae/error.hpp"
#include "gae/latent_mcmc.hpp"
#include "gae/oracle.hpp"
#include "oracles.hpp"

using namespace gae;
using gae::testing::kronecker_lyapunov;

namespace {

OracleSystem half_identity(double decoder_noise = 1.0, double corruption = 0.0) {
  // E = I, D = 0.5 I: M = 0.5 I, Q = (s_dec + s_cor) I.
  return OracleSystem(Eigen::MatrixXd::Identity(2, 2), 0.5 * Eigen::MatrixXd::Identity(2, 2), decoder_noise,
                      corruption);
}

}  // namespace

TEST(Moments, ZeroTransitionForgetsInOneStep) {
  const OracleSystem sys(Eigen::MatrixXd::Identity(2, 3), Eigen::MatrixXd::Zero(3, 2), 0.7, 0.0);
  const auto m = oracle_transition_moments(sys, Eigen::Vector2d(3, -4), 5.0 * Eigen::MatrixXd::Identity(2, 2));
  EXPECT_TRUE(m.mean.isZero());
  EXPECT_TRUE(m.cov.isApprox(sys.noise_covariance()));
}

TEST(Moments, HalfIdentityFromZeroCovariance) {
  const auto m = oracle_transition_moments(half_identity(), Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero());
  EXPECT_TRUE(m.cov.isApprox(Eigen::Matrix2d::Identity()));
}

TEST(Moments, MeanPropagationIsLinear) {
  Rng rng(1);
  const OracleSystem sys = random_contractive_system(3, 5, 0.8, 0.3, 0.1, rng);
  const Eigen::Vector3d m1(1, 2, 3), m2(-1, 0.5, 2);
  const Eigen::Matrix3d c = Eigen::Matrix3d::Identity();
  const double a = 0.7, b = -1.3;
  const Eigen::VectorXd lhs = oracle_transition_moments(sys, a * m1 + b * m2, c).mean;
  const Eigen::VectorXd rhs = a * oracle_transition_moments(sys, m1, c).mean + b * oracle_transition_moments(sys, m2, c).mean;
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
}

TEST(Moments, AsymmetricCovarianceIsContractError) {
  Eigen::Matrix2d c;
  c << 1, 0.5, 0.2, 1;
  EXPECT_THROW(oracle_transition_moments(half_identity(), Eigen::Vector2d::Zero(), c), ContractError);
}

TEST(Stationary, HalfIdentityIsFourThirds) {
  const Eigen::MatrixXd s = solve_stationary_cov(half_identity(), 1e-12);
  EXPECT_LT((s - (4.0 / 3.0) * Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-11);
}

TEST(Stationary, NoNoiseGivesZero) {
  EXPECT_TRUE(solve_stationary_cov(half_identity(0.0), 1e-12).isZero());
}

TEST(Stationary, RandomSystemsMatchKroneckerSolve) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t b = 1 + rng.index(4), a = b + rng.index(4);
    const OracleSystem sys = random_contractive_system(b, a, rng.uniform(0.1, 0.95), rng.uniform(0.1, 2.0),
                                                       rng.uniform(0.0, 1.0), rng);
    const double tol = 1e-10;
    const Eigen::MatrixXd s = solve_stationary_cov(sys, tol);
    const Eigen::MatrixXd m = sys.transition(), q = sys.noise_covariance();
    EXPECT_LE((m * s * m.transpose() + q - s).norm(), tol);
    const Eigen::MatrixXd ref = kronecker_lyapunov(m, q);
    EXPECT_LT((s - ref).norm() / ref.norm(), 1e-8) << i;
  }
}

TEST(Stationary, IteratedMomentsConverge) {
  Rng rng(3);
  const OracleSystem sys = random_contractive_system(3, 4, 0.5, 1.0, 0.25, rng);
  const double tol = 1e-10;
  const Eigen::MatrixXd s = solve_stationary_cov(sys, tol);
  Eigen::VectorXd mean = Eigen::VectorXd::Ones(3);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
  for (int t = 0; t < 200; ++t) {
    auto next = oracle_transition_moments(sys, mean, cov);
    mean = next.mean;
    cov = 0.5 * (next.cov + next.cov.transpose());
  }
  EXPECT_LT((cov - s).norm(), 10 * tol);
}

TEST(Stationary, NonContractiveDiverges) {
  const OracleSystem sys(Eigen::MatrixXd::Identity(2, 2), 1.5 * Eigen::MatrixXd::Identity(2, 2), 1.0, 0.0);
  EXPECT_FALSE(sys.is_contractive());
  EXPECT_THROW(solve_stationary_cov(sys, 1e-10), DivergenceError);
  const OracleSystem unit(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2), 1.0, 0.0);
  EXPECT_THROW(solve_stationary_cov(unit, 1e-10, 1000), DivergenceError);
}

TEST(Sampling, NoiselessPowerIteration) {
  Rng rng(4);
  Eigen::MatrixXd z0(1, 2);
  z0 << 1, 0;
  const auto trace = oracle_sample_chain(half_identity(0.0), z0, 3, rng);
  ASSERT_EQ(trace.size(), 4u);
  EXPECT_EQ(trace[3](0, 0), 0.125);
  EXPECT_EQ(trace[3](0, 1), 0.0);
}

TEST(Sampling, StationaryCovarianceFromTenThousandChains) {
  Rng rng(5);
  const Eigen::MatrixXd z0 = Eigen::MatrixXd::Zero(10000, 2);
  const auto trace = oracle_sample_chain(half_identity(), z0, 200, rng);
  const Eigen::MatrixXd expected = (4.0 / 3.0) * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_LT(frobenius_relative_error(sample_covariance(trace.back()), expected), 0.05);
}

TEST(Sampling, SeedDeterminism) {
  const Eigen::MatrixXd z0 = Eigen::MatrixXd::Ones(50, 2);
  Rng a(6), b(6);
  EXPECT_EQ(oracle_sample_chain(half_identity(), z0, 5, a).back(), oracle_sample_chain(half_identity(), z0, 5, b).back());
}

TEST(Wrap, RunChainMatchesOracleSampler) {
  Rng sys_rng(7);
  for (double corruption : {0.0, 0.3}) {
    const OracleSystem sys = random_contractive_system(3, 5, 0.7, 0.4, corruption, sys_rng);
    OracleKernel k = wrap_oracle_as_model(sys);
    const Eigen::MatrixXd z0 = Eigen::MatrixXd::Constant(20, 3, 0.5);
    Rng a(8), b(8);
    const auto direct = oracle_sample_chain(sys, z0, 10, a);
    const ChainTrace tr = run_chain(k, {to_tensor(z0), Provenance::prior, 0}, 10, corruption > 0.0, {corruption}, b);
    for (std::size_t t = 0; t <= 10; ++t) {
      EXPECT_LT((to_matrix(tr.latent(t).values) - direct[t]).cwiseAbs().maxCoeff(), 1e-12) << t;
    }
  }
}

TEST(Wrap, NoiselessWrapIsDeterministic) {
  Rng sys_rng(9);
  const OracleSystem sys = random_contractive_system(2, 3, 0.6, 0.0, 0.0, sys_rng);
  OracleKernel k = wrap_oracle_as_model(sys);
  Rng z(1), a(2), b(3);
  const LatentBatch z0 = sample_prior(5, {2}, z);
  EXPECT_EQ(run_chain(k, z0, 4, false, {0.0}, a).latent(4).values.to_vector(),
            run_chain(k, z0, 4, false, {0.0}, b).latent(4).values.to_vector());
}

TEST(Wrap, OneStepMomentsMatchThroughTheChainMachinery) {
  Rng sys_rng(10);
  const OracleSystem sys = random_contractive_system(2, 4, 0.6, 0.5, 0.0, sys_rng);
  OracleKernel k = wrap_oracle_as_model(sys);
  Eigen::MatrixXd z0(10000, 2);
  Rng rng(11);
  for (Eigen::Index i = 0; i < z0.size(); ++i) z0(i) = rng.normal();
  const auto expected = oracle_transition_moments(sys, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  const Transition t = transition_step(k, {to_tensor(z0), Provenance::prior, 0}, rng);
  EXPECT_LT(frobenius_relative_error(sample_covariance(to_matrix(t.z.values)), expected.cov), 0.05);
}

TEST(Wrap, CorruptionAddsExactlyItsTerm) {
  Rng sys_rng(12);
  const double variance = 0.5;
  const OracleSystem sys = random_contractive_system(2, 3, 0.5, 0.2, 0.0, sys_rng);
  const Eigen::MatrixXd eet = sys.encoder() * sys.encoder().transpose();
  // Closed form: the one-step covariance gains variance * E E^T.
  const auto plain = oracle_transition_moments(sys, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero());
  const auto noisy = oracle_transition_moments(sys.with_corruption(variance), Eigen::Vector2d::Zero(),
                                               Eigen::Matrix2d::Zero());
  EXPECT_LT((noisy.cov - plain.cov - variance * eet).norm(), 1e-14);
  // Measured through denoising_transition_step from a point mass.
  OracleKernel k = wrap_oracle_as_model(sys);
  const LatentBatch z0{Tensor::zeros({10000, 2}), Provenance::prior, 0};
  Rng a(13), b(14);
  const Eigen::MatrixXd c0 = sample_covariance(to_matrix(transition_step(k, z0, a).z.values));
  const Eigen::MatrixXd c1 = sample_covariance(to_matrix(denoising_transition_step(k, z0, {variance}, b).z.values));
  EXPECT_LT(frobenius_relative_error(c1 - c0, variance * eet), 0.1);
}

TEST(Suite, DefaultSuitePasses) {
  OracleSuiteOptions o;
  o.chains = 5000;
  o.random_systems = 3;
  o.sampled_tolerance = 0.08;
  o.corruption_tolerance = 0.05;
  for (const OracleCheck& c : run_oracle_suite(o)) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
}

TEST(Suite, NonContractiveReferenceFails) {
  OracleSuiteOptions o;
  o.chains = 500;
  o.steps = 20;
  o.random_systems = 1;
  o.reference_scale = 1.0;
  bool any_failed = false;
  for (const OracleCheck& c : run_oracle_suite(o)) any_failed = any_failed || !c.passed;
  EXPECT_TRUE(any_failed);
}
