#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gae/checkpoint.hpp"
#include "gae/cli.hpp"
#include "gae/config.hpp"
#include "gae/error.hpp"
#include "gae/image.hpp"
#include "gae/latent_mcmc.hpp"
#include "gae/manifest.hpp"
#include "gae/metrics.hpp"
#include "gae/oracle.hpp"
#include "gae/training.hpp"

namespace gae {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Independent random streams per purpose, derived from --seed.
enum Stream : std::uint64_t { kInitStream = 1, kTrainStream = 2, kSampleStream = 3 };

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string variant;
  std::optional<std::string> steps;
  std::optional<double> corruption_variance;
  std::string bn_mode;
  std::string out = "gae";
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path output_path(const GlobalOptions& g, const std::string& suffix) {
  fs::path p(g.out + suffix);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

/// Base config (checkpoint echo or defaults), replaced by --config when
/// given, then the individual flag overrides.
RunConfig resolve_config(const GlobalOptions& g, const std::string* echo) {
  RunConfig c;
  if (!g.config_path.empty()) {
    c = load_config(g.config_path);
  } else if (echo != nullptr && !echo->empty()) {
    c = parse_config(*echo);
  }
  if (!g.variant.empty() && !apply_variant(c, g.variant)) throw UsageError("unknown variant '" + g.variant + "'");
  if (g.steps) {
    try {
      c.steps = parse_index_list(*g.steps);
    } catch (const ParseError&) {
      throw UsageError("--steps expects a comma-separated list of non-negative integers");
    }
    if (c.steps.empty()) throw UsageError("--steps must name at least one step");
  }
  if (g.corruption_variance) {
    c.train.corruption.variance = *g.corruption_variance;
    c.model.corruption_variance = *g.corruption_variance;
  }
  if (g.bn_mode == "eval") c.bn_mode = Mode::eval;
  if (g.bn_mode == "train") c.bn_mode = Mode::train;
  return c;
}

RunManifest start_manifest(const GlobalOptions& g, const std::string& subcommand, const RunConfig& c) {
  RunManifest m;
  m.subcommand = subcommand;
  m.seed = g.seed;
  m.config = config_entries(config_text(c));
  if (!g.config_path.empty()) m.inputs["config"] = g.config_path;
  m.started_at = current_timestamp();
  return m;
}

void commit_manifest(const GlobalOptions& g, const RunManifest& m) {
  write_manifest(m, output_path(g, "." + m.subcommand + ".manifest.json"));
}

struct CheckpointRun {
  LoadedCheckpoint checkpoint;
  RunConfig config;
  bool denoising = false;
};

/// Loads a checkpoint and resolves the run config against its echo. A
/// --variant flag must name the checkpoint's model family; its denoising
/// half selects the plain or the corrupted transition.
CheckpointRun open_checkpoint(const GlobalOptions& g, const std::string& path) {
  if (path.empty()) throw UsageError("--checkpoint is required");
  LoadedCheckpoint ck = load_checkpoint(path);
  RunConfig c = resolve_config(g, &ck.config_echo);
  const ModelSpec& spec = ck.model.spec();
  bool denoising = spec.denoising;
  if (!g.variant.empty()) {
    if (c.model.variant != spec.variant) {
      throw ContractError("--variant " + g.variant + " does not match the checkpoint's " +
                          std::string(variant_name(spec.variant)) + " model");
    }
    denoising = c.model.denoising;
  }
  if (!g.corruption_variance) c.train.corruption.variance = spec.corruption_variance;
  return {std::move(ck), std::move(c), denoising};
}

std::string data_extension(const ModelSpec& spec) {
  return spec.image_height > 0 && spec.image_width > 0 ? ".pgm" : ".csv";
}

void write_rows_csv(const fs::path& path, const std::vector<std::string>& prefix_header,
                    const std::vector<std::vector<std::string>>& prefix, const std::vector<const Tensor*>& blocks,
                    const std::vector<char>& block_names) {
  std::ostringstream o;
  bool first = true;
  for (const auto& h : prefix_header) {
    o << (first ? "" : ",") << h;
    first = false;
  }
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t j = 0; j < blocks[b]->cols(); ++j) {
      o << (first ? "" : ",") << block_names[b] << j;
      first = false;
    }
  o << '\n';
  const std::size_t n = blocks.empty() ? prefix.size() : blocks.front()->rows();
  for (std::size_t i = 0; i < n; ++i) {
    first = true;
    for (const auto& field : prefix[i]) {
      o << (first ? "" : ",") << field;
      first = false;
    }
    for (const Tensor* t : blocks)
      for (std::size_t j = 0; j < t->cols(); ++j) {
        o << (first ? "" : ",") << num(t->at(i, j));
        first = false;
      }
    o << '\n';
  }
  write_text(path, o.str());
}

std::vector<std::vector<std::string>> index_column(std::size_t n) {
  std::vector<std::vector<std::string>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {std::to_string(i)};
  return out;
}

/// Square-ish layout for n images.
std::pair<std::size_t, std::size_t> grid_shape(std::size_t n) {
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  return {(n + cols - 1) / cols, cols};
}

void write_data_rows(const fs::path& path, const ModelSpec& spec, const Tensor& x, std::size_t rows, std::size_t cols) {
  if (spec.image_height > 0 && spec.image_width > 0) {
    write_image_grid(path, x.values(), x.rows(), rows, cols, spec.image_height, spec.image_width);
  } else {
    write_rows_csv(path, {"index"}, index_column(x.rows()), {&x}, {'x'});
  }
}

const Tensor& decoded_at(const ChainTrace& trace, std::size_t t, MarkovKernel& kernel, Rng& rng,
                         std::optional<Tensor>& scratch) {
  if (t < trace.length()) return trace.steps[t].x;
  scratch = kernel.decode(trace.latent(t).values, rng);
  return *scratch;
}

std::size_t max_step(const std::vector<std::size_t>& steps) {
  if (steps.empty()) throw UsageError("the steps list is empty");
  return *std::max_element(steps.begin(), steps.end());
}

// ---------------------------------------------------------------- train

int cmd_train(const GlobalOptions& g, const std::string& dataset, std::ostream& out) {
  RunConfig c = resolve_config(g, nullptr);
  if (!dataset.empty()) c.dataset = dataset;
  c.train.seed = g.seed;

  const fs::path ckpt = output_path(g, ".ckpt");
  const fs::path loss = output_path(g, ".loss.csv");
  RunManifest m = start_manifest(g, "train", c);
  m.inputs["dataset"] = c.dataset;
  if (!c.test_dataset.empty()) m.inputs["test_dataset"] = c.test_dataset;
  m.outputs["checkpoint"] = ckpt.string();
  m.outputs["loss_csv"] = loss.string();
  commit_manifest(g, m);

  auto [train_data, test_data] = load_run_data(c);
  const ModelSpec spec = model_spec_for(c, train_data);
  Rng master(g.seed);
  Rng init = master.derive(kInitStream);
  Rng rng = master.derive(kTrainStream);
  GenerativeAutoencoder model(spec, init);

  std::ofstream log(loss, std::ios::binary);
  if (!log) throw Error("cannot write " + loss.string());
  log << epoch_csv_header() << '\n';
  const auto stats = train(model, train_data, c.train, rng, [&](const EpochStats& s) {
    log << epoch_csv_row(s) << '\n';
    log.flush();
  });
  save_checkpoint(model, ckpt, config_text(c));
  out << "trained " << variant_label(c) << " for " << stats.size() << " epochs on " << train_data.size()
      << " samples";
  if (!stats.empty()) out << ", final recon_loss " << num(stats.back().recon_loss);
  out << "\ncheckpoint: " << ckpt.string() << "\nloss log: " << loss.string() << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- sample

int cmd_sample(const GlobalOptions& g, const std::string& checkpoint, std::size_t n, bool force_denoising,
               bool with_trace, std::ostream& out) {
  if (n == 0) throw UsageError("-n must be positive");
  CheckpointRun run = open_checkpoint(g, checkpoint);
  GenerativeAutoencoder& model = run.checkpoint.model;
  const RunConfig& c = run.config;
  const bool denoising = run.denoising || force_denoising;
  const std::size_t T = max_step(c.steps);
  const std::string ext = data_extension(model.spec());

  RunManifest m = start_manifest(g, "sample", c);
  m.inputs["checkpoint"] = checkpoint;
  m.config["sample.n"] = std::to_string(n);
  m.config["sample.denoising"] = denoising ? "true" : "false";
  std::vector<fs::path> files;
  for (std::size_t s : c.steps) {
    files.push_back(output_path(g, ".step" + std::to_string(s) + ext));
    m.outputs["step" + std::to_string(s)] = files.back().string();
  }
  const fs::path trace_path = output_path(g, ".trace.csv");
  if (with_trace) m.outputs["trace"] = trace_path.string();
  commit_manifest(g, m);

  Rng rng = Rng(g.seed).derive(kSampleStream);
  AutoencoderKernel kernel(model, KernelOptions{c.bn_mode, false});
  const LatentBatch z0 = sample_prior(n, model.prior(), rng);
  const ChainTrace trace = run_chain(kernel, z0, T, denoising, c.train.corruption, rng);

  const auto [rows, cols] = grid_shape(n);
  std::optional<Tensor> last;
  for (std::size_t k = 0; k < c.steps.size(); ++k) {
    const std::size_t s = c.steps[k];
    const Tensor& x = decoded_at(trace, s, kernel, rng, last);
    if (ext == ".pgm") {
      write_data_rows(files[k], model.spec(), x, rows, cols);
    } else {
      const Tensor& z = trace.latent(s).values;
      write_rows_csv(files[k], {"chain"}, index_column(n), {&z, &x}, {'z', 'x'});
    }
    out << "step " << s << ": " << files[k].string() << '\n';
  }
  if (with_trace) {
    std::vector<std::vector<std::string>> prefix;
    std::vector<double> zs, xs;
    for (std::size_t t = 0; t <= T; ++t) {
      const Tensor& x = decoded_at(trace, t, kernel, rng, last);
      const Tensor& z = trace.latent(t).values;
      for (std::size_t i = 0; i < n; ++i) prefix.push_back({std::to_string(t), std::to_string(i)});
      zs.insert(zs.end(), z.values().begin(), z.values().end());
      xs.insert(xs.end(), x.values().begin(), x.values().end());
    }
    const Tensor z_all = Tensor::matrix(n * (T + 1), model.latent_dim(), std::move(zs));
    const Tensor x_all = Tensor::matrix(n * (T + 1), model.data_dim(), std::move(xs));
    write_rows_csv(trace_path, {"step", "chain"}, prefix, {&z_all, &x_all}, {'z', 'x'});
    out << "trace: " << trace_path.string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------- interpolate

std::array<std::vector<double>, 4> read_corner_latents(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open latent file " + path);
  std::array<std::vector<double>, 4> corners;
  std::string line;
  std::size_t line_no = 0, found = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    if (found == 4) throw ParseError("latent file: more than four rows", line_no);
    std::vector<double> z;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        z.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ParseError("latent file line " + std::to_string(line_no) + ": bad number '" + field + "'", line_no);
      }
    }
    if (z.size() != dim) {
      throw ParseError("latent file line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                           " values",
                       line_no);
    }
    corners[found++] = std::move(z);
  }
  if (found != 4) throw ParseError("latent file: expected four rows, found " + std::to_string(found), line_no);
  return corners;
}

int cmd_interpolate(const GlobalOptions& g, const std::string& checkpoint, const std::string& indices,
                    const std::string& latents, std::size_t rows, std::size_t cols, std::ostream& out) {
  if (indices.empty() == latents.empty()) throw UsageError("give exactly one of --indices and --latents");
  if (rows < 2 || cols < 2) throw UsageError("--rows and --cols must be at least 2");
  std::vector<std::size_t> items;
  if (!indices.empty()) {
    try {
      items = parse_index_list(indices);
    } catch (const std::exception&) {
      throw UsageError("--indices expects four comma-separated test-split indices");
    }
    if (items.size() != 4) throw UsageError("--indices expects exactly four indices");
  }
  CheckpointRun run = open_checkpoint(g, checkpoint);
  GenerativeAutoencoder& model = run.checkpoint.model;
  const RunConfig& c = run.config;
  const std::size_t T = max_step(c.steps);
  const std::string ext = data_extension(model.spec());

  RunManifest m = start_manifest(g, "interpolate", c);
  m.inputs["checkpoint"] = checkpoint;
  if (!latents.empty()) m.inputs["latents"] = latents;
  if (!indices.empty()) m.config["interpolate.indices"] = indices;
  m.config["interpolate.rows"] = std::to_string(rows);
  m.config["interpolate.cols"] = std::to_string(cols);
  std::vector<fs::path> files;
  for (std::size_t s : c.steps) {
    files.push_back(output_path(g, ".interp.step" + std::to_string(s) + ext));
    m.outputs["step" + std::to_string(s)] = files.back().string();
  }
  commit_manifest(g, m);

  Rng rng = Rng(g.seed).derive(kSampleStream);
  AutoencoderKernel kernel(model, KernelOptions{c.bn_mode, false});
  std::array<std::vector<double>, 4> corners;
  if (!items.empty()) {
    const Dataset test = load_run_data(c).second;
    for (std::size_t i : items) {
      if (i >= test.size()) {
        throw ContractError("--indices: " + std::to_string(i) + " is outside the test split (size " +
                            std::to_string(test.size()) + ")");
      }
    }
    const Tensor z = kernel.encode(test.rows(items), rng);
    for (std::size_t k = 0; k < 4; ++k) {
      corners[k].assign(z.values().begin() + static_cast<std::ptrdiff_t>(k * z.cols()),
                        z.values().begin() + static_cast<std::ptrdiff_t>((k + 1) * z.cols()));
    }
  } else {
    corners = read_corner_latents(latents, model.latent_dim());
  }
  const LatentBatch grid = interpolation_grid(corners, rows, cols);
  const ChainTrace trace = run_chain(kernel, grid, T, run.denoising, c.train.corruption, rng);

  std::vector<std::vector<std::string>> cells;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t q = 0; q < cols; ++q) cells.push_back({std::to_string(r), std::to_string(q)});
  std::optional<Tensor> last;
  for (std::size_t k = 0; k < c.steps.size(); ++k) {
    const std::size_t s = c.steps[k];
    const Tensor& x = decoded_at(trace, s, kernel, rng, last);
    if (ext == ".pgm") {
      write_data_rows(files[k], model.spec(), x, rows, cols);
    } else {
      const Tensor& z = trace.latent(s).values;
      write_rows_csv(files[k], {"row", "col"}, cells, {&z, &x}, {'z', 'x'});
    }
    out << "step " << s << ": " << files[k].string() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------- reconstruct

int cmd_reconstruct(const GlobalOptions& g, const std::string& checkpoint, const std::string& split, std::size_t n,
                    std::ostream& out) {
  if (n == 0) throw UsageError("-n must be positive");
  CheckpointRun run = open_checkpoint(g, checkpoint);
  GenerativeAutoencoder& model = run.checkpoint.model;
  const RunConfig& c = run.config;
  const double variance = c.train.corruption.variance;
  const std::string ext = data_extension(model.spec());

  RunManifest m = start_manifest(g, "reconstruct", c);
  m.inputs["checkpoint"] = checkpoint;
  m.config["reconstruct.split"] = split;
  m.config["reconstruct.n"] = std::to_string(n);
  const fs::path csv = output_path(g, ".recon.csv");
  const fs::path clean_path = output_path(g, ".clean" + ext);
  const fs::path corrupted_path = output_path(g, ".corrupted" + ext);
  const fs::path recon_path = output_path(g, ".reconstruction" + ext);
  m.outputs["errors"] = csv.string();
  m.outputs["clean"] = clean_path.string();
  m.outputs["corrupted"] = corrupted_path.string();
  m.outputs["reconstruction"] = recon_path.string();
  commit_manifest(g, m);

  auto [train_data, test_data] = load_run_data(c);
  const Dataset& data = split == "train" ? train_data : test_data;
  if (n > data.size()) {
    throw ContractError("-n " + std::to_string(n) + " exceeds the " + split + " split size " +
                        std::to_string(data.size()));
  }
  Rng rng = Rng(g.seed).derive(kSampleStream);
  const DenoisingReport report = denoising_errors(model, data.range(0, n), variance, c.bn_mode, rng);

  const auto [rows, cols] = grid_shape(n);
  write_text(csv, denoising_csv(report));
  write_data_rows(clean_path, model.spec(), report.clean, rows, cols);
  write_data_rows(corrupted_path, model.spec(), report.corrupted, rows, cols);
  write_data_rows(recon_path, model.spec(), report.reconstruction, rows, cols);
  out << "mean corrupted-vs-clean squared error: " << num(report.mean_corrupted_error()) << '\n'
      << "mean reconstruction-vs-clean squared error: " << num(report.mean_reconstruction_error()) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- evaluate

int cmd_evaluate(const GlobalOptions& g, const std::string& checkpoint, std::optional<std::size_t> chains,
                 std::size_t length, std::ostream& out) {
  CheckpointRun run = open_checkpoint(g, checkpoint);
  GenerativeAutoencoder& model = run.checkpoint.model;
  const RunConfig& c = run.config;
  EvaluationOptions options;
  options.chains = chains.value_or(c.chains);
  options.steps = length;
  options.denoising = run.denoising;
  options.corruption = c.train.corruption;
  options.kernel = KernelOptions{c.bn_mode, false};
  if (options.chains == 0) throw UsageError("--chains must be positive");

  RunManifest m = start_manifest(g, "evaluate", c);
  m.inputs["checkpoint"] = checkpoint;
  m.config["evaluate.chains"] = std::to_string(options.chains);
  m.config["evaluate.length"] = std::to_string(length);
  const fs::path report_path = output_path(g, ".metrics.csv");
  const fs::path meta_path = output_path(g, ".metrics.meta.json");
  m.outputs["report"] = report_path.string();
  m.outputs["report_metadata"] = meta_path.string();
  commit_manifest(g, m);

  const Dataset test = load_run_data(c).second;
  Rng rng = Rng(g.seed).derive(kSampleStream);
  MetricsReport report = evaluate_latent_chains(model, test, options, rng);
  report.seed = g.seed;
  write_text(report_path, metrics_csv(report));
  std::ostringstream meta;
  meta << "{\n  \"bandwidth\": " << num(report.bandwidth) << ",\n  \"chain_samples\": " << report.chain_samples
       << ",\n  \"reference_samples\": " << report.reference_samples
       << ",\n  \"prior_samples\": " << report.prior_samples << ",\n  \"seed\": " << report.seed << "\n}\n";
  write_text(meta_path, meta.str());

  out << "step  mmd_to_encoded         mmd_to_prior           gaussian_kl_to_prior\n";
  for (const MetricsRow& r : report.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-5zu %-22.15g %-22.15g %.15g\n", r.step, r.mmd_to_encoded, r.mmd_to_prior,
                  r.gaussian_kl_to_prior);
    out << buf;
  }
  out << "report: " << report_path.string() << '\n';
  return kExitOk;
}

// --------------------------------------------------------- oracle-check

int cmd_oracle_check(const GlobalOptions& g, OracleSuiteOptions options, std::ostream& out) {
  options.seed = g.seed;
  RunConfig c = resolve_config(g, nullptr);
  RunManifest m = start_manifest(g, "oracle-check", c);
  m.config.clear();
  m.config["chains"] = std::to_string(options.chains);
  m.config["steps"] = std::to_string(options.steps);
  m.config["random_systems"] = std::to_string(options.random_systems);
  m.config["sampled_tolerance"] = num(options.sampled_tolerance);
  m.config["corruption_tolerance"] = num(options.corruption_tolerance);
  m.config["reference_scale"] = num(options.reference_scale);
  commit_manifest(g, m);

  const std::vector<OracleCheck> checks = run_oracle_suite(options);
  bool all = true;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-36s %-6s %-14s %-14s %s\n", "check", "result", "value", "threshold", "detail");
  out << buf;
  for (const OracleCheck& k : checks) {
    all = all && k.passed;
    std::snprintf(buf, sizeof buf, "%-36s %-6s %-14.6e %-14.6e ", k.name.c_str(), k.passed ? "PASS" : "FAIL",
                  k.value, k.threshold);
    out << buf << k.detail << '\n';
  }
  out << (all ? "all oracle checks passed" : "oracle checks FAILED") << '\n';
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generative autoencoder training and latent-space MCMC sampling", "gae"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  double corruption = 0.0;
  app.add_option("--config", g.config_path, "Run configuration file (key = value lines)");
  app.add_option("--seed", g.seed, "Seed for every random stream");
  app.add_option("--variant", g.variant, "Model variant")->check(CLI::IsMember({"vae", "dvae", "aae", "daae"}));
  app.add_option("--steps", g.steps, "Comma-separated chain steps to record (default 0,1,5,10)");
  auto* corruption_opt = app.add_option("--corruption-variance", corruption, "Variance of the Gaussian corruption")
                             ->check(CLI::NonNegativeNumber);
  app.add_option("--bn-mode", g.bn_mode, "Batch-norm mode while sampling")->check(CLI::IsMember({"train", "eval"}));
  app.add_option("--out", g.out, "Output path prefix");

  std::string dataset;
  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint and loss log");
  train->add_option("--dataset", dataset, "'mixture' or an IDX file (overrides the config)");

  std::string checkpoint;
  std::size_t n = 64;
  bool denoising = false, trace = false;
  auto* sample = app.add_subcommand("sample", "Draw prior samples and refine them with the latent chain");
  sample->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  sample->add_option("-n", n, "Number of chains");
  sample->add_flag("--denoising", denoising, "Corrupt decoded samples before re-encoding");
  sample->add_flag("--trace", trace, "Also write every step of every chain");

  std::string indices, latents;
  std::size_t rows = 8, cols = 8;
  auto* interpolate = app.add_subcommand("interpolate", "Spherical interpolation grid, refined by the chain");
  interpolate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  interpolate->add_option("--indices", indices, "Four test-split indices: top-left,top-right,bottom-left,bottom-right");
  interpolate->add_option("--latents", latents, "CSV file with four corner latent vectors");
  interpolate->add_option("--rows", rows, "Grid rows");
  interpolate->add_option("--cols", cols, "Grid columns");

  std::string split = "test";
  std::size_t recon_n = 16;
  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct corrupted inputs");
  reconstruct->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  reconstruct->add_option("--split", split, "Dataset split")->check(CLI::IsMember({"train", "test"}));
  reconstruct->add_option("-n", recon_n, "Number of items");

  std::optional<std::size_t> chains;
  std::size_t length = 10;
  auto* evaluate = app.add_subcommand("evaluate", "Chain diagnostics against the encoded test split and the prior");
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--chains", chains, "Number of chains (default from config)");
  evaluate->add_option("--length", length, "Chain length T; the report has T + 1 rows");

  OracleSuiteOptions oracle;
  auto* oracle_check = app.add_subcommand("oracle-check", "Verify the chain machinery on linear-Gaussian systems");
  oracle_check->add_option("--chains", oracle.chains, "Chains per sampled check");
  oracle_check->add_option("--chain-steps", oracle.steps, "Steps per sampled chain");
  oracle_check->add_option("--systems", oracle.random_systems, "Random contractive systems");
  oracle_check->add_option("--tolerance", oracle.sampled_tolerance, "Relative tolerance of sampled covariances");
  oracle_check->add_option("--corruption-tolerance", oracle.corruption_tolerance,
                           "Relative tolerance of the sampled corruption augmentation");
  oracle_check->add_option("--reference-scale", oracle.reference_scale,
                           "s in the reference system M = s I; values >= 1 are non-contractive");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gae: " << e.what() << "\nRun 'gae --help' for usage.\n";
    return kExitUsage;
  }
  if (corruption_opt->count() > 0) g.corruption_variance = corruption;

  try {
    if (*train) return cmd_train(g, dataset, out);
    if (*sample) return cmd_sample(g, checkpoint, n, denoising, trace, out);
    if (*interpolate) return cmd_interpolate(g, checkpoint, indices, latents, rows, cols, out);
    if (*reconstruct) return cmd_reconstruct(g, checkpoint, split, recon_n, out);
    if (*evaluate) return cmd_evaluate(g, checkpoint, chains, length, out);
    if (*oracle_check) return cmd_oracle_check(g, oracle, out);
  } catch (const UsageError& e) {
    err << "gae: " << e.what() << "\nRun 'gae --help' for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "gae: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gae
