#include "gae/checkpoint.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gae/error.hpp"

namespace gae {

namespace {

constexpr char kMagic[8] = {'G', 'A', 'E', 'C', 'K', 'P', 'T', '\0'};
constexpr std::size_t kHeader = sizeof(kMagic) + 4;
// Guards allocations when a body passes its crc but still describes absurd sizes.
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 32;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void sizes(const std::vector<std::size_t>& v) {
    u64(v.size());
    for (std::size_t x : v) u64(x);
  }
  void doubles(std::span<const double> v) {
    for (double x : v) f64(x);
  }
  void bytes(std::string_view s) {
    u64(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, std::size_t base) : data_(data), base_(base) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{data_[pos_++]} << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint64_t count() {
    const std::size_t at = pos_;
    const std::uint64_t n = u64();
    if (n > kMaxCount) throw ParseError("checkpoint: implausible count", base_ + at);
    return n;
  }
  std::vector<std::size_t> sizes() {
    std::vector<std::size_t> v(count());
    for (auto& x : v) x = count();
    return v;
  }
  std::string bytes() {
    const std::uint64_t n = count();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  void doubles(std::span<double> out) {
    need(out.size() * 8);
    for (double& x : out) x = f64();
  }
  std::size_t offset() const { return base_ + pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw ParseError("checkpoint: body truncated", base_ + pos_);
  }

  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(std::span<const std::uint8_t> data) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t n = std::min<std::size_t>(data.size() - pos, 1u << 30);
    c = crc32(c, data.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(c);
}

void write_spec(Writer& w, const ModelSpec& s) {
  w.u8(s.variant == Variant::vae ? 0 : 1);
  w.u8(s.denoising ? 1 : 0);
  w.f64(s.corruption_variance);
  w.u64(s.data_dim);
  w.u64(s.latent_dim);
  w.sizes(s.encoder_hidden);
  w.sizes(s.decoder_hidden);
  w.sizes(s.adversary_hidden);
  w.f64(s.leaky_slope);
  w.f64(s.dropout);
  w.f64(s.batch_norm.momentum);
  w.f64(s.batch_norm.epsilon);
  w.u64(s.image_height);
  w.u64(s.image_width);
}

ModelSpec read_spec(Reader& r) {
  ModelSpec s;
  const std::size_t at = r.offset();
  const std::uint8_t variant = r.u8();
  if (variant > 1) throw ParseError("checkpoint: unknown variant code", at);
  s.variant = variant == 0 ? Variant::vae : Variant::aae;
  s.denoising = r.u8() != 0;
  s.corruption_variance = r.f64();
  s.data_dim = r.count();
  s.latent_dim = r.count();
  s.encoder_hidden = r.sizes();
  s.decoder_hidden = r.sizes();
  s.adversary_hidden = r.sizes();
  s.leaky_slope = r.f64();
  s.dropout = r.f64();
  s.batch_norm.momentum = r.f64();
  s.batch_norm.epsilon = r.f64();
  s.image_height = r.count();
  s.image_width = r.count();
  return s;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const GenerativeAutoencoder& model, const std::string& config_echo) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kCheckpointVersion);

  write_spec(w, model.spec());
  w.bytes(config_echo);
  const std::vector<Tensor> params = model.parameters();
  w.u64(params.size());
  for (const Tensor& p : params) {
    w.sizes(p.shape());
    w.doubles(p.values());
  }
  const auto norms = model.batch_norm_layers();
  w.u64(norms.size());
  for (const BatchNormLayer* bn : norms) {
    w.u64(bn->features());
    w.doubles(bn->running_mean());
    w.doubles(bn->running_var());
  }

  std::vector<std::uint8_t>& out = w.buffer();
  const std::uint32_t sum = crc(std::span(out).subspan(kHeader));
  w.u32(sum);
  return std::move(out);
}

LoadedCheckpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) {
    if (i >= bytes.size()) throw ParseError("checkpoint: truncated magic", bytes.size());
    if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) throw ParseError("checkpoint: bad magic", i);
  }
  if (bytes.size() < kHeader) throw ParseError("checkpoint: truncated version", bytes.size());
  const std::uint32_t version = Reader(bytes.subspan(sizeof(kMagic), 4), sizeof(kMagic)).u32();
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint: unsupported format version " + std::to_string(version) + " (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  if (bytes.size() < kHeader + 4) throw ParseError("checkpoint: truncated body", bytes.size());
  const auto body = bytes.subspan(kHeader, bytes.size() - kHeader - 4);
  const std::uint32_t stored = Reader(bytes.subspan(bytes.size() - 4), bytes.size() - 4).u32();
  if (crc(body) != stored) throw ChecksumError("checkpoint: checksum mismatch");

  Reader r(body, kHeader);
  ModelSpec spec = read_spec(r);
  std::string echo = r.bytes();
  Rng scratch(0);
  GenerativeAutoencoder model(std::move(spec), scratch);

  std::vector<Tensor> params = model.parameters();
  const std::size_t at = r.offset();
  if (r.count() != params.size()) throw ParseError("checkpoint: parameter count does not match descriptor", at);
  for (Tensor& p : params) {
    const std::size_t shape_at = r.offset();
    if (r.sizes() != p.shape()) throw ParseError("checkpoint: parameter shape does not match descriptor", shape_at);
    r.doubles(p.mutable_values());
  }
  auto norms = model.batch_norm_layers();
  const std::size_t norms_at = r.offset();
  if (r.count() != norms.size()) throw ParseError("checkpoint: batch-norm count does not match descriptor", norms_at);
  for (BatchNormLayer* bn : norms) {
    const std::size_t f_at = r.offset();
    if (r.count() != bn->features()) throw ParseError("checkpoint: batch-norm width does not match", f_at);
    r.doubles(bn->running_mean());
    r.doubles(bn->running_var());
  }
  if (!r.done()) throw ParseError("checkpoint: trailing bytes in body", r.offset());
  return {std::move(model), std::move(echo)};
}

void save_checkpoint(const GenerativeAutoencoder& model, const std::filesystem::path& path,
                     const std::string& config_echo) {
  const auto data = encode_checkpoint(model, config_echo);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write failed for " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace gae
