#include "gae/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gae/error.hpp"
#include "gae/idx.hpp"

namespace gae {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct BadValue {
  std::string message;
};

std::size_t to_size(std::string_view s) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw BadValue{"expected a non-negative integer, got '" + std::string(s) + "'"};
  }
  return v;
}

std::size_t to_positive(std::string_view s) {
  const std::size_t v = to_size(s);
  if (v == 0) throw BadValue{"expected a positive integer"};
  return v;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw BadValue{"expected a finite number, got '" + std::string(s) + "'"};
  }
  return v;
}

double to_nonneg(std::string_view s) {
  const double v = to_double(s);
  if (v < 0.0) throw BadValue{"expected a value >= 0"};
  return v;
}

double to_positive_real(std::string_view s) {
  const double v = to_double(s);
  if (v <= 0.0) throw BadValue{"expected a value > 0"};
  return v;
}

double to_unit_open(std::string_view s) {
  const double v = to_double(s);
  if (v < 0.0 || v >= 1.0) throw BadValue{"expected a value in [0, 1)"};
  return v;
}

std::vector<std::size_t> index_list(std::string_view text) {
  std::vector<std::size_t> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(to_size(trim(text.substr(start, comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> to_widths(std::string_view s) {
  if (s == "none") return {};
  std::vector<std::size_t> out = index_list(s);
  for (std::size_t w : out)
    if (w == 0) throw BadValue{"layer widths must be positive"};
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"variant",
       [](RunConfig& c, std::string_view v) {
         if (!apply_variant(c, v)) throw BadValue{"variant must be one of vae, dvae, aae, daae"};
       }},
      {"epochs", [](RunConfig& c, std::string_view v) { c.train.epochs = to_size(v); }},
      {"batch_size", [](RunConfig& c, std::string_view v) { c.train.batch_size = to_positive(v); }},
      {"alpha", [](RunConfig& c, std::string_view v) { c.train.adam.alpha = to_positive_real(v); }},
      {"beta1", [](RunConfig& c, std::string_view v) { c.train.adam.beta1 = to_unit_open(v); }},
      {"beta2", [](RunConfig& c, std::string_view v) { c.train.adam.beta2 = to_unit_open(v); }},
      {"adam_epsilon", [](RunConfig& c, std::string_view v) { c.train.adam.epsilon = to_positive_real(v); }},
      {"corruption_variance",
       [](RunConfig& c, std::string_view v) {
         c.train.corruption.variance = to_nonneg(v);
         c.model.corruption_variance = c.train.corruption.variance;
       }},
      {"reconstruction_loss",
       [](RunConfig& c, std::string_view v) {
         if (v == "cross_entropy") {
           c.train.reconstruction_loss = ReconstructionLoss::cross_entropy;
         } else if (v == "squared_error") {
           c.train.reconstruction_loss = ReconstructionLoss::squared_error;
         } else {
           throw BadValue{"reconstruction_loss must be cross_entropy or squared_error"};
         }
       }},
      {"latent_dim",
       [](RunConfig& c, std::string_view v) {
         c.model.latent_dim = to_positive(v);
         c.latent_dim_set = true;
       }},
      {"encoder_hidden", [](RunConfig& c, std::string_view v) { c.model.encoder_hidden = to_widths(v); }},
      {"decoder_hidden", [](RunConfig& c, std::string_view v) { c.model.decoder_hidden = to_widths(v); }},
      {"adversary_hidden", [](RunConfig& c, std::string_view v) { c.model.adversary_hidden = to_widths(v); }},
      {"leaky_slope", [](RunConfig& c, std::string_view v) { c.model.leaky_slope = to_nonneg(v); }},
      {"dropout", [](RunConfig& c, std::string_view v) { c.model.dropout = to_unit_open(v); }},
      {"bn_momentum",
       [](RunConfig& c, std::string_view v) {
         c.model.batch_norm.momentum = to_double(v);
         if (c.model.batch_norm.momentum < 0.0 || c.model.batch_norm.momentum > 1.0) {
           throw BadValue{"bn_momentum must lie in [0, 1]"};
         }
       }},
      {"bn_epsilon", [](RunConfig& c, std::string_view v) { c.model.batch_norm.epsilon = to_positive_real(v); }},
      {"bn_mode",
       [](RunConfig& c, std::string_view v) {
         if (v == "train") {
           c.bn_mode = Mode::train;
         } else if (v == "eval") {
           c.bn_mode = Mode::eval;
         } else {
           throw BadValue{"bn_mode must be train or eval"};
         }
       }},
      {"dataset",
       [](RunConfig& c, std::string_view v) {
         if (v.empty()) throw BadValue{"dataset must not be empty"};
         c.dataset = std::string(v);
       }},
      {"test_dataset", [](RunConfig& c, std::string_view v) { c.test_dataset = std::string(v); }},
      {"mixture_components", [](RunConfig& c, std::string_view v) { c.mixture.components = to_positive(v); }},
      {"mixture_radius", [](RunConfig& c, std::string_view v) { c.mixture.radius = to_nonneg(v); }},
      {"mixture_std", [](RunConfig& c, std::string_view v) { c.mixture.component_std = to_positive_real(v); }},
      {"data_seed", [](RunConfig& c, std::string_view v) { c.data_seed = to_size(v); }},
      {"train_size", [](RunConfig& c, std::string_view v) { c.train_size = to_positive(v); }},
      {"test_size", [](RunConfig& c, std::string_view v) { c.test_size = to_positive(v); }},
      {"chains", [](RunConfig& c, std::string_view v) { c.chains = to_positive(v); }},
      {"steps",
       [](RunConfig& c, std::string_view v) {
         c.steps = index_list(v);
         if (c.steps.empty()) throw BadValue{"steps must not be empty"};
       }},
  };
  return table;
}

}  // namespace

std::vector<std::size_t> parse_index_list(std::string_view text) {
  try {
    std::vector<std::size_t> out = index_list(text);
    if (out.empty()) throw BadValue{"empty list"};
    return out;
  } catch (const BadValue& e) {
    throw ParseError("index list: " + e.message, 1);
  }
}

std::string variant_label(const RunConfig& config) {
  const bool d = config.model.denoising;
  if (config.model.variant == Variant::vae) return d ? "dvae" : "vae";
  return d ? "daae" : "aae";
}

bool apply_variant(RunConfig& config, std::string_view label) {
  Variant v;
  bool denoising;
  if (label == "vae") {
    v = Variant::vae, denoising = false;
  } else if (label == "dvae") {
    v = Variant::vae, denoising = true;
  } else if (label == "aae") {
    v = Variant::aae, denoising = false;
  } else if (label == "daae") {
    v = Variant::aae, denoising = true;
  } else {
    return false;
  }
  config.model.variant = v;
  config.model.denoising = denoising;
  config.train.denoising = denoising;
  return true;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("config line " + std::to_string(line_no) + ": expected key = value", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'", line_no);
    }
    if (!seen.insert(std::string(key)).second) {
      throw ParseError("config line " + std::to_string(line_no) + ": repeated key '" + std::string(key) + "'", line_no);
    }
    try {
      it->second(config, value);
    } catch (const BadValue& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + std::string(key) + ": " + e.message, line_no);
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

std::string config_text(const RunConfig& c) {
  std::ostringstream o;
  o << "variant = " << variant_label(c) << '\n'
    << "epochs = " << c.train.epochs << '\n'
    << "batch_size = " << c.train.batch_size << '\n'
    << "alpha = " << num(c.train.adam.alpha) << '\n'
    << "beta1 = " << num(c.train.adam.beta1) << '\n'
    << "beta2 = " << num(c.train.adam.beta2) << '\n'
    << "adam_epsilon = " << num(c.train.adam.epsilon) << '\n'
    << "corruption_variance = " << num(c.train.corruption.variance) << '\n'
    << "reconstruction_loss = "
    << (c.train.reconstruction_loss == ReconstructionLoss::cross_entropy ? "cross_entropy" : "squared_error") << '\n'
    << "latent_dim = " << c.model.latent_dim << '\n'
    << "encoder_hidden = " << join(c.model.encoder_hidden) << '\n'
    << "decoder_hidden = " << join(c.model.decoder_hidden) << '\n'
    << "adversary_hidden = " << join(c.model.adversary_hidden) << '\n'
    << "leaky_slope = " << num(c.model.leaky_slope) << '\n'
    << "dropout = " << num(c.model.dropout) << '\n'
    << "bn_momentum = " << num(c.model.batch_norm.momentum) << '\n'
    << "bn_epsilon = " << num(c.model.batch_norm.epsilon) << '\n'
    << "bn_mode = " << (c.bn_mode == Mode::train ? "train" : "eval") << '\n'
    << "dataset = " << c.dataset << '\n';
  if (!c.test_dataset.empty()) o << "test_dataset = " << c.test_dataset << '\n';
  o << "mixture_components = " << c.mixture.components << '\n'
    << "mixture_radius = " << num(c.mixture.radius) << '\n'
    << "mixture_std = " << num(c.mixture.component_std) << '\n'
    << "data_seed = " << c.data_seed << '\n'
    << "train_size = " << c.train_size << '\n'
    << "test_size = " << c.test_size << '\n'
    << "chains = " << c.chains << '\n'
    << "steps = " << join(c.steps) << '\n';
  return o.str();
}

std::pair<Dataset, Dataset> load_run_data(const RunConfig& c) {
  if (c.dataset == "mixture") {
    Dataset all = gen_gaussian_mixture(c.train_size + c.test_size, c.mixture, c.data_seed);
    return split_dataset(all, c.train_size);
  }
  Dataset data = load_idx(c.dataset);
  if (!c.test_dataset.empty()) {
    Dataset test = load_idx(c.test_dataset);
    if (test.dim != data.dim) throw ContractError("test dataset dimension differs from the training dataset");
    data.split = Split::train;
    test.split = Split::test;
    return {std::move(data), std::move(test)};
  }
  if (data.size() <= c.train_size) {
    throw ContractError("dataset has " + std::to_string(data.size()) + " rows; a test split needs more than train_size = " +
                        std::to_string(c.train_size));
  }
  return split_dataset(data, c.train_size);
}

ModelSpec model_spec_for(const RunConfig& config, const Dataset& train) {
  ModelSpec spec = config.model;
  spec.data_dim = train.dim;
  spec.image_height = train.image_height;
  spec.image_width = train.image_width;
  if (train.is_image() && !config.latent_dim_set) spec.latent_dim = 8;
  return spec;
}

}  // namespace gae
