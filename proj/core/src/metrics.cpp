#include "gae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "gae/error.hpp"
#include "gae/oracle.hpp"

namespace gae {

namespace {

double squared_distance(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double d = a(i, k) - b(j, k);
    s += d * d;
  }
  return s;
}

double mean_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double inv_two_h2) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) total += std::exp(-squared_distance(a, i, b, j) * inv_two_h2);
  return total / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}

// Orders two sample sets canonically so the cross term is summed in the same
// order whichever argument comes first.
bool canonically_before(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return true;
}

}  // namespace

double median_pairwise_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd pooled(a.rows() + b.rows(), a.cols());
  pooled << a, b;
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(pooled.rows() * (pooled.rows() - 1) / 2));
  for (Eigen::Index i = 0; i < pooled.rows(); ++i)
    for (Eigen::Index j = i + 1; j < pooled.rows(); ++j) d.push_back(std::sqrt(squared_distance(pooled, i, pooled, j)));
  if (d.empty()) return 1.0;
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

double mmd_rbf(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::optional<double> bandwidth) {
  if (a.rows() == 0 || b.rows() == 0) throw ContractError("mmd_rbf: sample sets must be non-empty");
  if (a.cols() != b.cols()) throw ContractError("mmd_rbf: sample sets differ in dimension");
  double h = bandwidth ? *bandwidth : median_pairwise_distance(a, b);
  if (!(h > 0.0)) h = 1.0;  // all pooled points coincide
  const double inv = 1.0 / (2.0 * h * h);
  const bool a_first = canonically_before(a, b);
  const Eigen::MatrixXd& first = a_first ? a : b;
  const Eigen::MatrixXd& second = a_first ? b : a;
  const double kaa = mean_kernel(first, first, inv);
  const double kbb = mean_kernel(second, second, inv);
  const double kab = mean_kernel(first, second, inv);
  return std::max(0.0, kaa + kbb - 2.0 * kab);
}

GaussianKl gaussian_kl_to_prior(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows(), b = samples.cols();
  if (n <= b) throw ContractError("gaussian_kl_to_prior: need more samples than dimensions");
  const Eigen::VectorXd m = samples.colwise().mean().transpose();
  Eigen::MatrixXd s = sample_covariance(samples);
  GaussianKl out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  const Eigen::VectorXd diag = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || diag.minCoeff() <= 1e-12 * std::max(1.0, diag.maxCoeff())) {
    s += 1e-6 * Eigen::MatrixXd::Identity(b, b);
    out.regularized = true;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const double log_det = eig.eigenvalues().array().log().sum();
  out.value = 0.5 * (s.trace() + m.squaredNorm() - static_cast<double>(b) - log_det);
  out.value = std::max(0.0, out.value);
  return out;
}

MetricsReport chain_diagnostics(const ChainTrace& trace, const LatentBatch& encoded_reference,
                                const PriorSpec& prior, Rng& rng) {
  if (encoded_reference.values.size() == 0 || encoded_reference.size() == 0) {
    throw ContractError("chain_diagnostics: empty reference");
  }
  const Eigen::MatrixXd reference = to_matrix(encoded_reference.values);
  const Eigen::MatrixXd z0 = to_matrix(trace.initial.values);
  if (reference.cols() != z0.cols()) throw ContractError("chain_diagnostics: reference dimension mismatch");

  MetricsReport report;
  report.seed = rng.seed();
  report.bandwidth = median_pairwise_distance(z0, reference);
  report.chain_samples = static_cast<std::size_t>(z0.rows());
  report.reference_samples = static_cast<std::size_t>(reference.rows());
  report.prior_samples = report.chain_samples;
  const Eigen::MatrixXd prior_batch = to_matrix(sample_prior(report.prior_samples, prior, rng).values);

  for (std::size_t t = 0; t <= trace.length(); ++t) {
    const Eigen::MatrixXd z = to_matrix(trace.latent(t).values);
    MetricsRow row;
    row.step = t;
    row.mmd_to_encoded = mmd_rbf(z, reference, report.bandwidth);
    row.mmd_to_prior = mmd_rbf(z, prior_batch, report.bandwidth);
    if (z.rows() > z.cols()) {
      const GaussianKl kl = gaussian_kl_to_prior(z);
      row.gaussian_kl_to_prior = kl.value;
      row.kl_regularized = kl.regularized;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sample_covariance(z), Eigen::EigenvaluesOnly);
      row.cov_eigen_min = eig.eigenvalues().minCoeff();
      row.cov_eigen_max = eig.eigenvalues().maxCoeff();
    } else {
      row.gaussian_kl_to_prior = std::nan("");
      row.cov_eigen_min = row.cov_eigen_max = std::nan("");
    }
    row.mean_norm = z.rowwise().norm().mean();
    report.rows.push_back(row);
  }
  return report;
}

std::string metrics_csv(const MetricsReport& report) {
  std::string out =
      "step,mmd_to_encoded,mmd_to_prior,gaussian_kl_to_prior,kl_regularized,mean_norm,cov_eigen_min,"
      "cov_eigen_max\n";
  char buf[512];
  for (const MetricsRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", r.step, r.mmd_to_encoded,
                  r.mmd_to_prior, r.gaussian_kl_to_prior, r.kl_regularized ? 1 : 0, r.mean_norm, r.cov_eigen_min,
                  r.cov_eigen_max);
    out += buf;
  }
  return out;
}

MetricsReport evaluate_latent_chains(GenerativeAutoencoder& model, const Dataset& reference,
                                     const EvaluationOptions& options, Rng& rng) {
  if (options.chains == 0) throw ContractError("evaluate_latent_chains: at least one chain required");
  if (reference.size() == 0) throw ContractError("evaluate_latent_chains: empty reference data");
  AutoencoderKernel kernel(model, options.kernel);
  const LatentBatch encoded{kernel.encode(reference.all(), rng), Provenance::encoded, 0};
  const LatentBatch z0 = sample_prior(options.chains, model.prior(), rng);
  const ChainTrace trace = run_chain(kernel, z0, options.steps, options.denoising, options.corruption, rng);
  return chain_diagnostics(trace, encoded, model.prior(), rng);
}

namespace {

std::vector<double> row_squared_distances(const Tensor& a, const Tensor& b) {
  std::vector<double> out(a.rows(), 0.0);
  const std::size_t d = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double r = a[i * d + j] - b[i * d + j];
      out[i] += r * r;
    }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

double DenoisingReport::mean_corrupted_error() const { return mean_of(corrupted_error); }
double DenoisingReport::mean_reconstruction_error() const { return mean_of(reconstruction_error); }

DenoisingReport denoising_errors(GenerativeAutoencoder& model, const Tensor& clean, double variance, Mode norm_mode,
                                 Rng& rng) {
  if (clean.rank() != 2 || clean.cols() != model.data_dim()) {
    throw ContractError("denoising_errors: clean batch must have shape (n, data_dim)");
  }
  AutoencoderKernel kernel(model, KernelOptions{norm_mode, true});
  DenoisingReport r;
  r.clean = clean;
  r.corrupted = corrupt(clean, CorruptionSpec{variance}, rng);
  r.reconstruction = kernel.decode(kernel.encode(r.corrupted, rng), rng);
  r.corrupted_error = row_squared_distances(r.corrupted, clean);
  r.reconstruction_error = row_squared_distances(r.reconstruction, clean);
  return r;
}

std::string denoising_csv(const DenoisingReport& report) {
  std::string out = "index,corrupted_sq_error,reconstruction_sq_error\n";
  char buf[128];
  for (std::size_t i = 0; i < report.corrupted_error.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, report.corrupted_error[i], report.reconstruction_error[i]);
    out += buf;
  }
  return out;
}

}  // namespace gae
