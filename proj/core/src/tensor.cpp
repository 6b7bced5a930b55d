#include "gae/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "gae/error.hpp"

namespace gae {

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool has_grad = false;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;
  std::string_view op = "leaf";
};

}  // namespace detail

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

namespace {

thread_local bool g_grad_enabled = true;

void check_shape(const Shape& shape) {
  for (auto extent : shape) {
    if (extent == 0) throw ShapeError("tensor extents must be positive, got " + shape_string(shape));
  }
}

}  // namespace

struct TensorAccess {
  static const NodePtr& node(const Tensor& t) {
    if (!t.node_) throw ContractError("operation on an undefined tensor");
    return t.node_;
  }

  static Tensor make_result(std::string_view op, Shape shape, std::vector<double> values,
                            std::vector<NodePtr> parents, std::function<void(Node&)> backward) {
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw DomainError(std::string(op) + " produced a non-finite value");
      }
    }
    auto node = std::make_shared<Node>();
    node->shape = std::move(shape);
    node->value = std::move(values);
    node->op = op;
    const bool needs_grad =
        g_grad_enabled &&
        std::any_of(parents.begin(), parents.end(), [](const NodePtr& p) { return p->requires_grad; });
    if (needs_grad) {
      node->requires_grad = true;
      node->parents = std::move(parents);
      node->backward = std::move(backward);
    }
    return Tensor(std::move(node));
  }
};

namespace {

const NodePtr& node_of(const Tensor& t) { return TensorAccess::node(t); }

template <class... Args>
Tensor make_result(Args&&... args) {
  return TensorAccess::make_result(std::forward<Args>(args)...);
}

[[noreturn]] void shape_error(std::string_view op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a) + " and " +
                   shape_string(b));
}

enum class Broadcast { same, scalar, row };

struct BroadcastPlan {
  Shape out;
  Broadcast a;
  Broadcast b;
  std::size_t cols;
};

bool is_row_of(const Shape& row, const Shape& full) {
  if (full.size() != 2) return false;
  const std::size_t c = full[1];
  return (row.size() == 1 && row[0] == c) || (row.size() == 2 && row[0] == 1 && row[1] == c);
}

BroadcastPlan plan_broadcast(std::string_view op, const Shape& a, const Shape& b) {
  if (a == b) return {a, Broadcast::same, Broadcast::same, a.empty() ? 1 : a.back()};
  if (shape_size(a) == 1) return {b, Broadcast::scalar, Broadcast::same, b.back()};
  if (shape_size(b) == 1) return {a, Broadcast::same, Broadcast::scalar, a.back()};
  if (is_row_of(b, a)) return {a, Broadcast::same, Broadcast::row, a[1]};
  if (is_row_of(a, b)) return {b, Broadcast::row, Broadcast::same, b[1]};
  shape_error(op, a, b);
}

inline std::size_t source_index(Broadcast mode, std::size_t i, std::size_t cols) {
  switch (mode) {
    case Broadcast::same:
      return i;
    case Broadcast::scalar:
      return 0;
    case Broadcast::row:
      return i % cols;
  }
  return i;
}

// f(a, b) -> value; da(a, b) and db(a, b) -> local partial derivatives.
template <class F, class DA, class DB>
Tensor binary_op(std::string_view op, const Tensor& a, const Tensor& b, F f, DA da, DB db) {
  const NodePtr& na = node_of(a);
  const NodePtr& nb = node_of(b);
  const BroadcastPlan plan = plan_broadcast(op, na->shape, nb->shape);
  const std::size_t n = shape_size(plan.out);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = f(na->value[source_index(plan.a, i, plan.cols)],
               nb->value[source_index(plan.b, i, plan.cols)]);
  }
  return make_result(op, plan.out, std::move(out), std::vector<NodePtr>{na, nb},
                     [plan, da, db](Node& self) {
                       Node& pa = *self.parents[0];
                       Node& pb = *self.parents[1];
                       for (std::size_t i = 0; i < self.grad.size(); ++i) {
                         const std::size_t ia = source_index(plan.a, i, plan.cols);
                         const std::size_t ib = source_index(plan.b, i, plan.cols);
                         const double g = self.grad[i];
                         const double av = pa.value[ia];
                         const double bv = pb.value[ib];
                         if (pa.requires_grad) pa.grad[ia] += g * da(av, bv);
                         if (pb.requires_grad) pb.grad[ib] += g * db(av, bv);
                       }
                     });
}

// f(x) -> y; df(x, y) -> dy/dx.
template <class F, class DF>
Tensor unary_op(std::string_view op, const Tensor& a, F f, DF df) {
  const NodePtr& na = node_of(a);
  std::vector<double> out(na->value.size());
  std::transform(na->value.begin(), na->value.end(), out.begin(), f);
  return make_result(op, na->shape, std::move(out), std::vector<NodePtr>{na}, [df](Node& self) {
    Node& p = *self.parents[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      p.grad[i] += self.grad[i] * df(p.value[i], self.value[i]);
    }
  });
}

void require_rank2(std::string_view op, const Shape& s) {
  if (s.size() != 2) {
    throw ShapeError(std::string(op) + ": expected a rank-2 tensor, got " + shape_string(s));
  }
}

}  // namespace

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ", ";
    out << shape[i];
  }
  out << ')';
  return out.str();
}

// ---------------------------------------------------------------------------
// Tensor

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad) {
  check_shape(shape);
  if (shape.empty()) throw ShapeError("tensor rank must be at least 1");
  if (shape_size(shape) != values.size()) {
    throw ShapeError("tensor of shape " + shape_string(shape) + " needs " +
                     std::to_string(shape_size(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("tensor values must be finite");
  }
  node_ = std::make_shared<Node>();
  node_->shape = std::move(shape);
  node_->value = std::move(values);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  check_shape(shape);
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor({1}, {value}, requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                      bool requires_grad) {
  return Tensor({rows, cols}, std::move(values), requires_grad);
}

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values), requires_grad);
}

Node& Tensor::node() const {
  if (!node_) throw ContractError("operation on an undefined tensor");
  return *node_;
}

const Shape& Tensor::shape() const { return node().shape; }
std::size_t Tensor::size() const { return node().value.size(); }

std::size_t Tensor::rows() const {
  const Shape& s = shape();
  return s.size() >= 2 ? s[0] : 1;
}

std::size_t Tensor::cols() const { return shape().back(); }

std::span<const double> Tensor::values() const { return node().value; }

std::span<double> Tensor::mutable_values() {
  Node& n = node();
  if (!n.parents.empty()) {
    throw ContractError("mutable_values() is only permitted on leaf tensors");
  }
  return n.value;
}

std::vector<double> Tensor::to_vector() const { return node().value; }

double Tensor::item() const {
  const Node& n = node();
  if (n.value.size() != 1) {
    throw ContractError("item() requires a single-element tensor, got " + shape_string(n.shape));
  }
  return n.value[0];
}

double Tensor::at(std::size_t row, std::size_t col) const {
  const Node& n = node();
  const std::size_t c = n.shape.back();
  if (row >= rows() || col >= c) throw ContractError("tensor index out of range");
  return n.value[row * c + col];
}

bool Tensor::requires_grad() const { return node().requires_grad; }
bool Tensor::is_leaf() const { return node().parents.empty(); }
bool Tensor::has_grad() const { return node().has_grad; }

std::span<const double> Tensor::grad() const {
  const Node& n = node();
  if (!n.has_grad) throw ContractError("tensor has no gradient");
  return n.grad;
}

void Tensor::zero_grad() {
  Node& n = node();
  n.grad.assign(n.value.size(), 0.0);
  n.has_grad = true;
}

Tensor Tensor::detach() const { return Tensor(node().shape, node().value, false); }

std::string_view Tensor::op_name() const { return node().op; }

void Tensor::backward() const {
  Node& root = node();
  if (root.value.size() != 1) {
    throw ContractError("backward() requires a scalar loss, got shape " + shape_string(root.shape));
  }
  if (!root.requires_grad) return;

  // Post-order DFS over the differentiable subgraph.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack{{&root, 0}};
  visited.insert(&root);
  while (!stack.empty()) {
    auto& [current, next_parent] = stack.back();
    if (next_parent < current->parents.size()) {
      Node* parent = current->parents[next_parent++].get();
      if (parent->requires_grad && visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(current);
      stack.pop_back();
    }
  }

  for (Node* n : order) {
    if (!n->parents.empty() || !n->has_grad) {
      n->grad.assign(n->value.size(), 0.0);
      n->has_grad = true;
    }
  }
  root.grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool grad_mode_enabled() noexcept { return g_grad_enabled; }

// ---------------------------------------------------------------------------
// Primitives

Tensor matmul(const Tensor& a, const Tensor& b) {
  const NodePtr& na = node_of(a);
  const NodePtr& nb = node_of(b);
  require_rank2("matmul", na->shape);
  require_rank2("matmul", nb->shape);
  const std::size_t n = na->shape[0], k = na->shape[1], m = nb->shape[1];
  if (nb->shape[0] != k) shape_error("matmul", na->shape, nb->shape);
  std::vector<double> out(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = na->value[i * k + p];
      const double* brow = &nb->value[p * m];
      double* orow = &out[i * m];
      for (std::size_t j = 0; j < m; ++j) orow[j] += aip * brow[j];
    }
  }
  return make_result("matmul", Shape{n, m}, std::move(out), std::vector<NodePtr>{na, nb},
                     [n, k, m](Node& self) {
                       Node& pa = *self.parents[0];
                       Node& pb = *self.parents[1];
                       const double* g = self.grad.data();
                       if (pa.requires_grad) {
                         for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t p = 0; p < k; ++p) {
                             const double* brow = &pb.value[p * m];
                             double acc = 0.0;
                             for (std::size_t j = 0; j < m; ++j) acc += g[i * m + j] * brow[j];
                             pa.grad[i * k + p] += acc;
                           }
                         }
                       }
                       if (pb.requires_grad) {
                         for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t p = 0; p < k; ++p) {
                             const double aip = pa.value[i * k + p];
                             double* brow = &pb.grad[p * m];
                             for (std::size_t j = 0; j < m; ++j) brow[j] += aip * g[i * m + j];
                           }
                         }
                       }
                     });
}

Tensor transpose(const Tensor& a) {
  const NodePtr& na = node_of(a);
  require_rank2("transpose", na->shape);
  const std::size_t r = na->shape[0], c = na->shape[1];
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = na->value[i * c + j];
  return make_result("transpose", Shape{c, r}, std::move(out), std::vector<NodePtr>{na},
                     [r, c](Node& self) {
                       Node& p = *self.parents[0];
                       for (std::size_t i = 0; i < r; ++i)
                         for (std::size_t j = 0; j < c; ++j) p.grad[i * c + j] += self.grad[j * r + i];
                     });
}

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_op(
      "add", a, b, [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_op(
      "sub", a, b, [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  return binary_op(
      "hadamard", a, b, [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary_op(
      "scale", a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor relu(const Tensor& a) {
  return unary_op(
      "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return unary_op(
      "leaky_relu", a, [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor sigmoid(const Tensor& a) {
  const double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  return unary_op(
      "sigmoid", a,
      [lo, hi](double x) {
        const double y = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        return std::clamp(y, lo, hi);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary_op(
      "tanh", a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor exp(const Tensor& a) {
  return unary_op(
      "exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  for (double v : node_of(a)->value) {
    if (!(v > 0.0)) throw DomainError("log: argument must be strictly positive, got " + std::to_string(v));
  }
  return unary_op(
      "log", a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor sum(const Tensor& a) {
  const NodePtr& na = node_of(a);
  double total = 0.0;
  for (double v : na->value) total += v;
  return make_result("sum", Shape{1}, std::vector<double>{total}, std::vector<NodePtr>{na},
                     [](Node& self) {
                       Node& p = *self.parents[0];
                       for (double& g : p.grad) g += self.grad[0];
                     });
}

Tensor mean(const Tensor& a) {
  const NodePtr& na = node_of(a);
  const double n = static_cast<double>(na->value.size());
  double total = 0.0;
  for (double v : na->value) total += v;
  return make_result("mean", Shape{1}, std::vector<double>{total / n}, std::vector<NodePtr>{na},
                     [n](Node& self) {
                       Node& p = *self.parents[0];
                       for (double& g : p.grad) g += self.grad[0] / n;
                     });
}

Tensor concat(std::initializer_list<Tensor> parts) {
  return concat(std::span<const Tensor>(parts.begin(), parts.size()));
}

Tensor concat(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat: needs at least one input");
  std::vector<NodePtr> nodes;
  for (const Tensor& t : parts) nodes.push_back(node_of(t));
  const Shape& first = nodes[0]->shape;
  if (first.size() > 2) throw ShapeError("concat: supports rank 1 and 2, got " + shape_string(first));
  const std::size_t rows = first.size() == 2 ? first[0] : 1;
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const NodePtr& n : nodes) {
    if (n->shape.size() != first.size() || (first.size() == 2 && n->shape[0] != rows)) {
      shape_error("concat", first, n->shape);
    }
    widths.push_back(n->shape.back());
    total += n->shape.back();
  }
  std::vector<double> out(rows * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(&nodes[k]->value[r * widths[k]], widths[k], &out[r * total + offset]);
    offset += widths[k];
  }
  Shape shape = first.size() == 2 ? Shape{rows, total} : Shape{total};
  return make_result("concat", std::move(shape), std::move(out), std::move(nodes),
                     [rows, total, widths](Node& self) {
                       std::size_t offset = 0;
                       for (std::size_t k = 0; k < self.parents.size(); ++k) {
                         Node& p = *self.parents[k];
                         if (p.requires_grad) {
                           for (std::size_t r = 0; r < rows; ++r)
                             for (std::size_t j = 0; j < widths[k]; ++j)
                               p.grad[r * widths[k] + j] += self.grad[r * total + offset + j];
                         }
                         offset += widths[k];
                       }
                     });
}

Tensor slice(const Tensor& a, std::size_t begin, std::size_t end) {
  const NodePtr& na = node_of(a);
  const Shape& s = na->shape;
  if (s.size() > 2) throw ShapeError("slice: supports rank 1 and 2, got " + shape_string(s));
  const std::size_t cols = s.back();
  if (begin >= end || end > cols) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") invalid for shape " + shape_string(s));
  }
  const std::size_t rows = s.size() == 2 ? s[0] : 1;
  const std::size_t width = end - begin;
  std::vector<double> out(rows * width);
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(&na->value[r * cols + begin], width, &out[r * width]);
  Shape shape = s.size() == 2 ? Shape{rows, width} : Shape{width};
  return make_result("slice", std::move(shape), std::move(out), std::vector<NodePtr>{na},
                     [rows, cols, begin, width](Node& self) {
                       Node& p = *self.parents[0];
                       for (std::size_t r = 0; r < rows; ++r)
                         for (std::size_t j = 0; j < width; ++j)
                           p.grad[r * cols + begin + j] += self.grad[r * width + j];
                     });
}

Tensor normalize_batch(const Tensor& x, double epsilon, std::vector<double>* batch_mean,
                       std::vector<double>* batch_var) {
  const NodePtr& nx = node_of(x);
  require_rank2("normalize_batch", nx->shape);
  if (!(epsilon >= 0.0)) throw ContractError("normalize_batch: epsilon must be non-negative");
  const std::size_t n = nx->shape[0], d = nx->shape[1];
  std::vector<double> mu(d, 0.0), var(d, 0.0), inv(d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mu[j] += nx->value[i * d + j];
  for (double& m : mu) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = nx->value[i * d + j] - mu[j];
      var[j] += c * c;
    }
  for (double& v : var) v /= static_cast<double>(n);
  std::vector<double> out(n * d);
  for (std::size_t j = 0; j < d; ++j) {
    const double denom = var[j] + epsilon;
    inv[j] = denom > 0.0 ? 1.0 / std::sqrt(denom) : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = (nx->value[i * d + j] - mu[j]) * inv[j];
  if (batch_mean) *batch_mean = mu;
  if (batch_var) *batch_var = var;
  return make_result("normalize_batch", nx->shape, std::move(out), std::vector<NodePtr>{nx},
                     [n, d, inv](Node& self) {
                       Node& p = *self.parents[0];
                       const double nn = static_cast<double>(n);
                       for (std::size_t j = 0; j < d; ++j) {
                         double g_sum = 0.0, gy_sum = 0.0;
                         for (std::size_t i = 0; i < n; ++i) {
                           g_sum += self.grad[i * d + j];
                           gy_sum += self.grad[i * d + j] * self.value[i * d + j];
                         }
                         const double g_mean = g_sum / nn, gy_mean = gy_sum / nn;
                         for (std::size_t i = 0; i < n; ++i) {
                           p.grad[i * d + j] +=
                               inv[j] * (self.grad[i * d + j] - g_mean - self.value[i * d + j] * gy_mean);
                         }
                       }
                     });
}

// ---------------------------------------------------------------------------

std::string_view primitive_name(Primitive kind) {
  switch (kind) {
    case Primitive::matmul: return "matmul";
    case Primitive::transpose: return "transpose";
    case Primitive::add: return "add";
    case Primitive::sub: return "sub";
    case Primitive::hadamard: return "hadamard";
    case Primitive::scale: return "scale";
    case Primitive::relu: return "relu";
    case Primitive::leaky_relu: return "leaky_relu";
    case Primitive::sigmoid: return "sigmoid";
    case Primitive::tanh: return "tanh";
    case Primitive::exp: return "exp";
    case Primitive::log: return "log";
    case Primitive::sum: return "sum";
    case Primitive::mean: return "mean";
    case Primitive::concat: return "concat";
    case Primitive::slice: return "slice";
    case Primitive::normalize_batch: return "normalize_batch";
  }
  return "unknown";
}

Tensor apply_primitive(Primitive kind, std::span<const Tensor> inputs, const PrimitiveArgs& args) {
  auto arity = [&](std::size_t expected) {
    if (inputs.size() != expected) {
      throw ContractError(std::string(primitive_name(kind)) + ": expected " + std::to_string(expected) +
                          " inputs, got " + std::to_string(inputs.size()));
    }
  };
  switch (kind) {
    case Primitive::matmul: arity(2); return matmul(inputs[0], inputs[1]);
    case Primitive::transpose: arity(1); return transpose(inputs[0]);
    case Primitive::add: arity(2); return add(inputs[0], inputs[1]);
    case Primitive::sub: arity(2); return sub(inputs[0], inputs[1]);
    case Primitive::hadamard: arity(2); return hadamard(inputs[0], inputs[1]);
    case Primitive::scale: arity(1); return scale(inputs[0], args.scalar);
    case Primitive::relu: arity(1); return relu(inputs[0]);
    case Primitive::leaky_relu: arity(1); return leaky_relu(inputs[0], args.scalar);
    case Primitive::sigmoid: arity(1); return sigmoid(inputs[0]);
    case Primitive::tanh: arity(1); return tanh(inputs[0]);
    case Primitive::exp: arity(1); return exp(inputs[0]);
    case Primitive::log: arity(1); return log(inputs[0]);
    case Primitive::sum: arity(1); return sum(inputs[0]);
    case Primitive::mean: arity(1); return mean(inputs[0]);
    case Primitive::concat: return concat(inputs);
    case Primitive::slice: arity(1); return slice(inputs[0], args.begin, args.end);
    case Primitive::normalize_batch: arity(1); return normalize_batch(inputs[0], args.scalar);
  }
  throw ContractError("unknown primitive");
}

}  // namespace gae
