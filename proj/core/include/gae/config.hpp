#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gae/dataset.hpp"
#include "gae/layers.hpp"
#include "gae/model.hpp"
#include "gae/training.hpp"

namespace gae {

/// Everything a run needs besides the seed: training recipe, architecture
/// and data source.
struct RunConfig {
  TrainConfig train{};
  ModelSpec model{};
  /// "mixture" or a path to an IDX file.
  std::string dataset = "mixture";
  /// Optional separate IDX file for the test split.
  std::string test_dataset;
  MixtureOptions mixture{};
  /// Seed of the synthetic mixture, independent of the run seed so that
  /// every subcommand sees the same data.
  std::uint64_t data_seed = 0;
  std::size_t train_size = 4096;
  std::size_t test_size = 1024;
  std::size_t chains = 500;
  std::vector<std::size_t> steps{0, 1, 5, 10};
  Mode bn_mode = Mode::train;
  /// Whether latent_dim was given explicitly; image data otherwise gets 8.
  bool latent_dim_set = false;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// ignored and omitted keys keep their defaults. Unknown keys, repeated
/// keys and unparsable values raise ParseError with the 1-based line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(config_text(c)) reproduces c.
std::string config_text(const RunConfig& config);

/// Train and test splits named by the config: train_size + test_size
/// mixture samples, or the IDX file(s). Without a test file the IDX rows
/// after the first train_size form the test split.
std::pair<Dataset, Dataset> load_run_data(const RunConfig& config);

/// The configured architecture sized for `train`: data_dim and image
/// extents from the data, latent_dim 8 for image data unless set.
ModelSpec model_spec_for(const RunConfig& config, const Dataset& train);

/// "vae", "dvae", "aae" or "daae".
std::string variant_label(const RunConfig& config);
/// Sets model variant and the denoising flag of both model and training.
/// Returns false for an unknown label.
bool apply_variant(RunConfig& config, std::string_view label);

/// Comma-separated non-negative integers, e.g. "0,1,5,10"; at least one.
std::vector<std::size_t> parse_index_list(std::string_view text);

}  // namespace gae
