#include "gae/oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gae/error.hpp"

namespace gae {

OracleSystem::OracleSystem(Eigen::MatrixXd encoder, Eigen::MatrixXd decoder, double decoder_noise_variance,
                           double corruption_variance)
    : encoder_(std::move(encoder)),
      decoder_(std::move(decoder)),
      decoder_noise_variance_(decoder_noise_variance),
      corruption_variance_(corruption_variance) {
  if (encoder_.size() == 0 || decoder_.size() == 0) throw ContractError("OracleSystem: empty maps");
  if (decoder_.rows() != encoder_.cols() || decoder_.cols() != encoder_.rows()) {
    throw ShapeError("OracleSystem: encoder must be b x a and decoder a x b");
  }
  if (!(decoder_noise_variance >= 0.0) || !(corruption_variance >= 0.0)) {
    throw ContractError("OracleSystem: noise variances must be non-negative");
  }
  if (!encoder_.allFinite() || !decoder_.allFinite()) throw DomainError("OracleSystem: non-finite maps");
}

Eigen::MatrixXd OracleSystem::noise_covariance() const {
  return (decoder_noise_variance_ + corruption_variance_) * encoder_ * encoder_.transpose();
}

double OracleSystem::spectral_radius() const {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(transition(), false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

OracleSystem OracleSystem::with_corruption(double variance) const {
  return OracleSystem(encoder_, decoder_, decoder_noise_variance_, variance);
}

OracleSystem random_contractive_system(std::size_t latent_dim, std::size_t data_dim, double radius,
                                       double decoder_noise_variance, double corruption_variance, Rng& rng) {
  if (latent_dim == 0 || data_dim == 0) throw ContractError("random_contractive_system: empty dimensions");
  if (!(radius > 0.0 && radius < 1.0)) throw ContractError("random_contractive_system: radius must be in (0, 1)");
  const auto b = static_cast<Eigen::Index>(latent_dim), a = static_cast<Eigen::Index>(data_dim);
  Eigen::MatrixXd e(b, a), d(a, b);
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = rng.normal() / std::sqrt(static_cast<double>(a));
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.normal();
  OracleSystem raw(e, d, decoder_noise_variance, corruption_variance);
  const double rho = raw.spectral_radius();
  if (!(rho > 0.0)) throw ContractError("random_contractive_system: degenerate draw");
  return OracleSystem(e, d * (radius / rho), decoder_noise_variance, corruption_variance);
}

GaussianMoments oracle_transition_moments(const OracleSystem& sys, const Eigen::VectorXd& mean,
                                          const Eigen::MatrixXd& cov) {
  const auto b = static_cast<Eigen::Index>(sys.latent_dim());
  if (mean.size() != b || cov.rows() != b || cov.cols() != b) {
    throw ShapeError("oracle_transition_moments: moments do not match the latent dimension");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractError("oracle_transition_moments: covariance must be symmetric");
  }
  const Eigen::MatrixXd m = sys.transition();
  return {m * mean, m * cov * m.transpose() + sys.noise_covariance()};
}

Eigen::MatrixXd solve_stationary_cov(const OracleSystem& sys, double tol, std::size_t max_iterations) {
  if (!(tol > 0.0)) throw ContractError("solve_stationary_cov: tol must be positive");
  const Eigen::MatrixXd m = sys.transition();
  const Eigen::MatrixXd q = sys.noise_covariance();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd next = m * sigma * m.transpose() + q;
    const double residual = (next - sigma).norm();
    if (!std::isfinite(residual) || !next.allFinite()) {
      throw DivergenceError("solve_stationary_cov: iterate diverged after " + std::to_string(it + 1) +
                            " iterations (spectral radius " + std::to_string(sys.spectral_radius()) + ")");
    }
    if (residual <= tol) return sigma;
    sigma = std::move(next);
  }
  throw DivergenceError("solve_stationary_cov: no convergence within " + std::to_string(max_iterations) +
                        " iterations (spectral radius " + std::to_string(sys.spectral_radius()) + ")");
}

std::vector<Eigen::MatrixXd> oracle_sample_chain(const OracleSystem& sys, const Eigen::MatrixXd& z0,
                                                 std::size_t steps, Rng& rng) {
  if (z0.cols() != static_cast<Eigen::Index>(sys.latent_dim())) {
    throw ShapeError("oracle_sample_chain: z0 must have latent_dim columns");
  }
  const Eigen::Index n = z0.rows(), a = static_cast<Eigen::Index>(sys.data_dim());
  const Eigen::MatrixXd mt = sys.transition().transpose();
  const Eigen::MatrixXd et = sys.encoder().transpose();
  const double sd_dec = std::sqrt(sys.decoder_noise_variance());
  const double sd_cor = std::sqrt(sys.corruption_variance());
  std::vector<Eigen::MatrixXd> trace{z0};
  trace.reserve(steps + 1);
  for (std::size_t t = 0; t < steps; ++t) {
    Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(n, a);
    if (sd_dec > 0.0)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < a; ++j) noise(i, j) += sd_dec * rng.normal();
    if (sd_cor > 0.0)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < a; ++j) noise(i, j) += sd_cor * rng.normal();
    trace.push_back(trace.back() * mt + noise * et);
  }
  return trace;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd to_matrix(const Tensor& t) {
  const auto r = static_cast<Eigen::Index>(t.rows()), c = static_cast<Eigen::Index>(t.cols());
  Eigen::MatrixXd m(r, c);
  auto v = t.values();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = v[static_cast<std::size_t>(i * c + j)];
  return m;
}

Tensor to_tensor(const Eigen::MatrixXd& m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return Tensor::matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), std::move(v));
}

Tensor OracleKernel::decode(const Tensor& z, Rng& rng) {
  Eigen::MatrixXd x = to_matrix(z) * sys_.decoder().transpose();
  const double sd = std::sqrt(sys_.decoder_noise_variance());
  if (sd > 0.0)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) += sd * rng.normal();
  return to_tensor(x);
}

Tensor OracleKernel::encode(const Tensor& x, Rng&) { return to_tensor(to_matrix(x) * sys_.encoder().transpose()); }

std::uint64_t OracleKernel::fingerprint() const {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  auto fold = [&h](double v) { h = mix64(h ^ std::bit_cast<std::uint64_t>(v)); };
  for (Eigen::Index i = 0; i < sys_.encoder().size(); ++i) fold(sys_.encoder()(i));
  for (Eigen::Index i = 0; i < sys_.decoder().size(); ++i) fold(sys_.decoder()(i));
  fold(sys_.decoder_noise_variance());
  fold(sys_.corruption_variance());
  return h;
}

OracleKernel wrap_oracle_as_model(const OracleSystem& sys) { return OracleKernel(sys); }

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
  if (samples.rows() == 0) throw ContractError("sample_covariance: no samples");
  const Eigen::RowVectorXd mu = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mu;
  return centered.transpose() * centered / static_cast<double>(samples.rows());
}

double frobenius_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

// ---------------------------------------------------------------------------

namespace {

OracleSystem reference_system(double scale) {
  // E = I, D = s I, decoder noise 1: M = s I and Q = I.
  return OracleSystem(Eigen::MatrixXd::Identity(2, 2), scale * Eigen::MatrixXd::Identity(2, 2), 1.0, 0.0);
}

Eigen::MatrixXd stationary_samples(const OracleSystem& sys, std::size_t chains, std::size_t steps, Rng& rng) {
  Eigen::MatrixXd z0 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(chains),
                                             static_cast<Eigen::Index>(sys.latent_dim()));
  for (Eigen::Index i = 0; i < z0.size(); ++i) z0(i) = rng.normal();
  return oracle_sample_chain(sys, z0, steps, rng).back();
}

template <class F>
OracleCheck guarded(std::string name, double threshold, F&& body) {
  OracleCheck check{std::move(name), false, 0.0, threshold, ""};
  try {
    body(check);
  } catch (const Error& e) {
    check.passed = false;
    check.detail = e.what();
  }
  return check;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& o) {
  Rng rng(o.seed);
  const OracleSystem reference = reference_system(o.reference_scale);
  std::vector<OracleSystem> systems;
  for (std::size_t k = 0; k < o.random_systems; ++k) {
    const std::size_t b = 1 + rng.index(4);
    const std::size_t a = b + rng.index(3);
    systems.push_back(random_contractive_system(b, a, rng.uniform(0.2, 0.9), rng.uniform(0.5, 2.0), 0.0, rng));
  }
  std::vector<OracleCheck> checks;

  checks.push_back(guarded("stationary_cov_reference_analytic", 1e-9, [&](OracleCheck& c) {
    const Eigen::MatrixXd sigma = solve_stationary_cov(reference, o.lyapunov_tol);
    const double s2 = o.reference_scale * o.reference_scale;
    const Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(2, 2) / (1.0 - s2);
    c.value = (sigma - expected).norm();
    c.passed = c.value <= c.threshold;
    c.detail = "Sigma = I / (1 - s^2)";
  }));

  std::vector<const OracleSystem*> all{&reference};
  for (const auto& s : systems) all.push_back(&s);

  checks.push_back(guarded("lyapunov_residual", o.lyapunov_tol, [&](OracleCheck& c) {
    double worst = 0.0;
    for (const OracleSystem* sys : all) {
      const Eigen::MatrixXd sigma = solve_stationary_cov(*sys, o.lyapunov_tol);
      const Eigen::MatrixXd m = sys->transition();
      worst = std::max(worst, (m * sigma * m.transpose() + sys->noise_covariance() - sigma).norm());
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
  }));

  checks.push_back(guarded("moment_propagation", o.lyapunov_tol * 10.0, [&](OracleCheck& c) {
    // Enough steps for every contractive system here to converge, whatever
    // chain length the sampled checks use.
    constexpr std::size_t kMomentSteps = 2000;
    double worst = 0.0;
    for (const OracleSystem* sys : all) {
      const auto b = static_cast<Eigen::Index>(sys->latent_dim());
      GaussianMoments m{Eigen::VectorXd::Zero(b), Eigen::MatrixXd::Zero(b, b)};
      for (std::size_t t = 0; t < kMomentSteps; ++t) m = oracle_transition_moments(*sys, m.mean, m.cov);
      worst = std::max(worst, (m.cov - solve_stationary_cov(*sys, o.lyapunov_tol)).norm());
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
  }));

  checks.push_back(guarded("sampled_stationary_reference", o.sampled_tolerance, [&](OracleCheck& c) {
    const Eigen::MatrixXd sigma = solve_stationary_cov(reference, o.lyapunov_tol);
    const Eigen::MatrixXd z = stationary_samples(reference, o.chains, o.steps, rng);
    c.value = frobenius_relative_error(sample_covariance(z), sigma);
    c.passed = c.value <= c.threshold;
  }));

  checks.push_back(guarded("sampled_stationary_random", o.sampled_tolerance, [&](OracleCheck& c) {
    double worst = 0.0;
    for (const auto& sys : systems) {
      const Eigen::MatrixXd sigma = solve_stationary_cov(sys, o.lyapunov_tol);
      const Eigen::MatrixXd z = stationary_samples(sys, o.chains, o.steps, rng);
      worst = std::max(worst, frobenius_relative_error(sample_covariance(z), sigma));
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
    c.detail = std::to_string(systems.size()) + " systems";
  }));

  constexpr double kCorruption = 0.25;
  checks.push_back(guarded("corruption_augmentation_exact", 1e-12, [&](OracleCheck& c) {
    const auto b = static_cast<Eigen::Index>(reference.latent_dim());
    const Eigen::VectorXd mean = Eigen::VectorXd::Zero(b);
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(b, b);
    const auto plain = oracle_transition_moments(reference, mean, cov);
    const auto noisy = oracle_transition_moments(reference.with_corruption(kCorruption), mean, cov);
    const Eigen::MatrixXd e = reference.encoder();
    c.value = (noisy.cov - plain.cov - kCorruption * e * e.transpose()).norm();
    c.passed = c.value <= c.threshold;
  }));

  checks.push_back(guarded("corruption_augmentation_sampled", o.corruption_tolerance, [&](OracleCheck& c) {
    // One denoising transition from a point mass through the model-facing
    // chain machinery; the decoder is noise-free so all spread is corruption.
    const OracleSystem sys(reference.encoder(), reference.decoder(), 0.0, kCorruption);
    OracleKernel kernel = wrap_oracle_as_model(sys);
    const auto n = o.chains;
    LatentBatch z0{Tensor::full({n, sys.latent_dim()}, 1.0), Provenance::prior, 0};
    Rng chain_rng = rng.derive(7);
    Transition step = denoising_transition_step(kernel, z0, CorruptionSpec{kCorruption}, chain_rng);
    const Eigen::MatrixXd measured = sample_covariance(to_matrix(step.z.values));
    const Eigen::MatrixXd expected = kCorruption * sys.encoder() * sys.encoder().transpose();
    c.value = frobenius_relative_error(measured, expected);
    c.passed = c.value <= c.threshold;
  }));

  checks.push_back(guarded("kernel_equivalence", 1e-9, [&](OracleCheck& c) {
    const OracleSystem sys = systems.empty() ? reference : systems.front().with_corruption(kCorruption);
    OracleKernel kernel = wrap_oracle_as_model(sys);
    Rng init = rng.derive(11);
    const LatentBatch z0 = sample_prior(64, PriorSpec{sys.latent_dim()}, init);
    Rng r1(o.seed + 1), r2(o.seed + 1);
    const ChainTrace trace = run_chain(kernel, z0, 10, true, CorruptionSpec{sys.corruption_variance()}, r1);
    const auto direct = oracle_sample_chain(sys, to_matrix(z0.values), 10, r2);
    double worst = 0.0;
    for (std::size_t t = 0; t <= 10; ++t) {
      worst = std::max(worst, (to_matrix(trace.latent(t).values) - direct[t]).cwiseAbs().maxCoeff());
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
  }));

  return checks;
}

}  // namespace gae
