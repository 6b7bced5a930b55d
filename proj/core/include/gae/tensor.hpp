#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gae {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {
struct Node;
}

/// Dense row-major array of doubles with an optional gradient.
///
/// A Tensor is a cheap handle; copies share storage. Values produced by an
/// operation are never written again, with the single exception of leaf
/// tensors (parameters), which optimizers and checkpoint loading update in
/// place through mutable_values(). Every operation on tensors that require
/// gradients records an edge in a define-by-run graph that backward() walks.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values, bool requires_grad = false);
  static Tensor vector(std::vector<double> values, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }

  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t size() const;
  /// Leading extent of a rank-2 tensor (1 for rank-1).
  std::size_t rows() const;
  /// Trailing extent.
  std::size_t cols() const;

  std::span<const double> values() const;
  /// Writable storage; only permitted on leaf tensors.
  std::span<double> mutable_values();
  std::vector<double> to_vector() const;

  double item() const;
  double at(std::size_t row, std::size_t col) const;
  double operator[](std::size_t flat_index) const { return values()[flat_index]; }

  bool requires_grad() const;
  bool is_leaf() const;
  bool has_grad() const;
  std::span<const double> grad() const;
  /// Allocates (or resets) the gradient buffer to zeros.
  void zero_grad();

  /// Same values, no graph history, no gradient requirement.
  Tensor detach() const;

  /// Reverse-mode sweep from this scalar; accumulates into leaf gradients.
  void backward() const;

  std::string_view op_name() const;

  /// True when both handles refer to the same storage.
  bool same_storage(const Tensor& other) const noexcept { return node_ == other.node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  detail::Node& node() const;

  std::shared_ptr<detail::Node> node_;

  friend struct TensorAccess;
};

/// While alive, operations on this thread record no graph edges.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_mode_enabled() noexcept;

// Primitives. Binary elementwise operations accept equal shapes, a
// single-element operand, or a row vector (shape {c} or {1, c}) that is
// broadcast across the rows of a rank-2 operand with c columns.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope = 0.2);
/// Logistic function; results are kept strictly inside (0, 1).
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
/// Full reductions to a single-element tensor of shape {1}.
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
/// Concatenation along the trailing axis.
Tensor concat(std::span<const Tensor> parts);
Tensor concat(std::initializer_list<Tensor> parts);
/// Columns [begin, end) along the trailing axis.
Tensor slice(const Tensor& a, std::size_t begin, std::size_t end);
/// Per-column standardisation of an (n, d) batch with biased batch variance:
/// (x - mean) / sqrt(var + epsilon). Batch mean and variance are written to
/// the optional outputs.
Tensor normalize_batch(const Tensor& x, double epsilon,
                       std::vector<double>* batch_mean = nullptr,
                       std::vector<double>* batch_var = nullptr);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return hadamard(a, b); }
inline Tensor operator*(double c, const Tensor& a) { return scale(a, c); }
inline Tensor operator*(const Tensor& a, double c) { return scale(a, c); }
inline Tensor operator-(const Tensor& a) { return scale(a, -1.0); }

enum class Primitive {
  matmul,
  transpose,
  add,
  sub,
  hadamard,
  scale,
  relu,
  leaky_relu,
  sigmoid,
  tanh,
  exp,
  log,
  sum,
  mean,
  concat,
  slice,
  normalize_batch,
};

std::string_view primitive_name(Primitive kind);

/// Scalar arguments used by some primitives: `scalar` is the factor for
/// scale, the slope for leaky_relu and epsilon for normalize_batch;
/// begin/end delimit slice.
struct PrimitiveArgs {
  double scalar = 1.0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Uniform entry point over every primitive, used by property tests.
Tensor apply_primitive(Primitive kind, std::span<const Tensor> inputs,
                       const PrimitiveArgs& args = {});

}  // namespace gae
