// Copyright 2026 The rulenet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rulenet/autodiff.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rulenet {

namespace {

std::size_t arity_of(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant:
    case OpKind::kParameter:
      return 0;
    case OpKind::kNeg:
    case OpKind::kExp:
    case OpKind::kLog:
    case OpKind::kSigmoid:
    case OpKind::kTanh:
    case OpKind::kSoftmax:
    case OpKind::kMaxReduce:
    case OpKind::kClamp:
    case OpKind::kStopGradient:
    case OpKind::kSumReduce:
    case OpKind::kIndex:
      return 1;
    case OpKind::kAdd:
    case OpKind::kSub:
    case OpKind::kMul:
    case OpKind::kDiv:
    case OpKind::kDot:
    case OpKind::kCosineSimilarity:
    case OpKind::kMatVec:
      return 2;
    case OpKind::kConcat:
    case OpKind::kMean:
      return static_cast<std::size_t>(-1);  // variadic, at least one
  }
  return 0;
}

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double sigmoid_of(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Value of element i of a possibly broadcast scalar operand.
inline double at(const std::vector<double>& v, std::size_t i) {
  return v.size() == 1 ? v[0] : v[i];
}

// Adds `delta` into the adjoint slot of `id`, summing over broadcast axes
// when the operand is a scalar.
void push(std::vector<std::vector<double>>& adj, NodeId id, std::size_t size,
          std::size_t i, double delta) {
  auto& slot = adj[id.index];
  if (slot.empty()) slot.assign(size, 0.0);
  if (size == 1) {
    slot[0] += delta;
  } else {
    slot[i] += delta;
  }
}

std::string describe(OpKind kind, std::span<const Shape> shapes) {
  std::ostringstream out;
  out << to_string(kind) << " with input shapes";
  for (const Shape& s : shapes) out << ' ' << to_string(s);
  return out.str();
}

}  // namespace

std::string to_string(const Shape& shape) {
  return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant: return "constant";
    case OpKind::kParameter: return "parameter";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kDiv: return "div";
    case OpKind::kNeg: return "neg";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kDot: return "dot";
    case OpKind::kCosineSimilarity: return "cosine_similarity";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kMaxReduce: return "max_reduce";
    case OpKind::kClamp: return "clamp";
    case OpKind::kStopGradient: return "stop_gradient";
    case OpKind::kSumReduce: return "sum_reduce";
    case OpKind::kMatVec: return "matvec";
    case OpKind::kIndex: return "index";
    case OpKind::kConcat: return "concat";
    case OpKind::kMean: return "mean";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ParameterStore

void ParameterStore::create(const std::string& name, Shape shape,
                            std::vector<double> values, bool trainable) {
  if (entries_.contains(name)) {
    throw std::invalid_argument("parameter already exists: " + name);
  }
  if (values.size() != shape.size()) {
    throw std::invalid_argument("parameter " + name + " has " +
                                std::to_string(values.size()) +
                                " values for shape " + to_string(shape));
  }
  entries_.emplace(name, Entry{shape, std::move(values), trainable});
}

bool ParameterStore::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

const ParameterStore::Entry& ParameterStore::at(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw std::out_of_range("unknown parameter: " + std::string(name));
  }
  return it->second;
}

void ParameterStore::assign(std::string_view name,
                            std::span<const double> values) {
  auto target = mutable_values(name);
  if (values.size() != target.size()) {
    throw std::invalid_argument("shape change for parameter " +
                                std::string(name));
  }
  std::copy(values.begin(), values.end(), target.begin());
}

std::span<double> ParameterStore::mutable_values(std::string_view name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw std::out_of_range("unknown parameter: " + std::string(name));
  }
  return it->second.values;
}

std::size_t ParameterStore::trainable_count() const {
  return std::count_if(entries_.begin(), entries_.end(),
                       [](const auto& kv) { return kv.second.trainable; });
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, entry] : entries_) n += entry.values.size();
  return n;
}

// ---------------------------------------------------------------------------
// Tape: forward

NodeId Tape::append(Node node) {
  nodes_.push_back(std::move(node));
  return NodeId{nodes_.size() - 1};
}

const Tape::Node& Tape::node(NodeId id) const {
  if (!valid(id)) {
    throw std::out_of_range("node id " + std::to_string(id.index) +
                            " out of range");
  }
  return nodes_[id.index];
}

std::span<const double> Tape::value(NodeId id) const { return node(id).value; }

double Tape::scalar(NodeId id) const {
  const Node& n = node(id);
  if (!n.shape.is_scalar()) {
    throw StructuralError("node " + std::to_string(id.index) +
                          " is not scalar: " + to_string(n.shape));
  }
  return n.value[0];
}

const Shape& Tape::shape(NodeId id) const { return node(id).shape; }

NodeId Tape::emit(OpKind kind, std::span<const NodeId> inputs,
                  const Payload& payload) {
  const std::size_t arity = arity_of(kind);
  if (arity == static_cast<std::size_t>(-1)) {
    if (inputs.empty()) {
      throw StructuralError(std::string(to_string(kind)) +
                            " needs at least one input");
    }
  } else if (inputs.size() != arity) {
    throw StructuralError(std::string(to_string(kind)) + " expects " +
                          std::to_string(arity) + " inputs, got " +
                          std::to_string(inputs.size()));
  }
  std::vector<Shape> shapes;
  shapes.reserve(inputs.size());
  for (NodeId id : inputs) {
    if (!valid(id)) {
      throw StructuralError("input node " + std::to_string(id.index) +
                            " does not exist");
    }
    shapes.push_back(nodes_[id.index].shape);
  }

  Node out{kind, std::vector<NodeId>(inputs.begin(), inputs.end()), {}, {}};
  auto in = [&](std::size_t k) -> const std::vector<double>& {
    return nodes_[inputs[k].index].value;
  };
  auto fail = [&](std::string_view why) {
    throw StructuralError(describe(kind, shapes) + ": " + std::string(why));
  };

  switch (kind) {
    case OpKind::kConstant:
    case OpKind::kParameter:
      if (payload.values.size() != payload.shape.size()) {
        fail("payload does not match its shape");
      }
      out.shape = payload.shape;
      out.value = payload.values;
      break;

    case OpKind::kAdd:
    case OpKind::kSub:
    case OpKind::kMul:
    case OpKind::kDiv: {
      const Shape& a = shapes[0];
      const Shape& b = shapes[1];
      if (!(a == b || a.is_scalar() || b.is_scalar())) fail("shape mismatch");
      out.shape = a.is_scalar() ? b : a;
      out.value.resize(out.shape.size());
      const auto& x = in(0);
      const auto& y = in(1);
      for (std::size_t i = 0; i < out.value.size(); ++i) {
        const double u = at(x, i);
        const double v = at(y, i);
        switch (kind) {
          case OpKind::kAdd: out.value[i] = u + v; break;
          case OpKind::kSub: out.value[i] = u - v; break;
          case OpKind::kMul: out.value[i] = u * v; break;
          default:
            if (v == 0.0) throw DomainError("division by zero");
            out.value[i] = u / v;
        }
      }
      break;
    }

    case OpKind::kNeg:
    case OpKind::kExp:
    case OpKind::kLog:
    case OpKind::kSigmoid:
    case OpKind::kTanh:
    case OpKind::kStopGradient: {
      out.shape = shapes[0];
      out.value = in(0);
      for (double& v : out.value) {
        switch (kind) {
          case OpKind::kNeg: v = -v; break;
          case OpKind::kExp: v = std::exp(v); break;
          case OpKind::kLog:
            if (v <= 0.0) {
              throw DomainError("log of non-positive value " +
                                std::to_string(v));
            }
            v = std::log(v);
            break;
          case OpKind::kSigmoid: v = sigmoid_of(v); break;
          case OpKind::kTanh: v = std::tanh(v); break;
          default: break;
        }
      }
      break;
    }

    case OpKind::kClamp:
      if (!(payload.lo <= payload.hi)) fail("clamp bounds out of order");
      out.shape = shapes[0];
      out.value = in(0);
      out.lo = payload.lo;
      out.hi = payload.hi;
      for (double& v : out.value) v = std::clamp(v, payload.lo, payload.hi);
      break;

    case OpKind::kDot:
    case OpKind::kCosineSimilarity: {
      if (!(shapes[0] == shapes[1]) || !shapes[0].is_vector()) {
        fail("operands must be vectors of equal length");
      }
      const auto& x = in(0);
      const auto& y = in(1);
      double d = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
      if (kind == OpKind::kCosineSimilarity) {
        const double nx = norm(x);
        const double ny = norm(y);
        if (nx == 0.0 || ny == 0.0) {
          throw DomainError("cosine similarity of a zero vector");
        }
        d /= nx * ny;
      }
      out.shape = Shape{1, 1};
      out.value = {d};
      break;
    }

    case OpKind::kSoftmax: {
      if (!shapes[0].is_vector()) fail("softmax expects a vector");
      out.shape = shapes[0];
      out.value = in(0);
      const double peak = *std::max_element(out.value.begin(), out.value.end());
      double total = 0.0;
      for (double& v : out.value) {
        v = std::exp(v - peak);
        total += v;
      }
      for (double& v : out.value) v /= total;
      break;
    }

    case OpKind::kMaxReduce: {
      const auto& x = in(0);
      // First-encountered maximum wins ties.
      out.index = static_cast<std::size_t>(
          std::max_element(x.begin(), x.end()) - x.begin());
      out.shape = Shape{1, 1};
      out.value = {x[out.index]};
      break;
    }

    case OpKind::kSumReduce: {
      const auto& x = in(0);
      out.shape = Shape{1, 1};
      out.value = {std::accumulate(x.begin(), x.end(), 0.0)};
      break;
    }

    case OpKind::kMatVec: {
      const Shape& m = shapes[0];
      const Shape& v = shapes[1];
      if (!v.is_vector() || m.cols != v.rows) fail("matvec shape mismatch");
      const auto& a = in(0);
      const auto& x = in(1);
      out.shape = Shape{m.rows, 1};
      out.value.assign(m.rows, 0.0);
      for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = a.data() + r * m.cols;
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) s += row[c] * x[c];
        out.value[r] = s;
      }
      break;
    }

    case OpKind::kIndex:
      if (payload.index >= shapes[0].size()) fail("index out of range");
      out.index = payload.index;
      out.shape = Shape{1, 1};
      out.value = {in(0)[payload.index]};
      break;

    case OpKind::kConcat: {
      std::size_t total = 0;
      for (const Shape& s : shapes) {
        if (!s.is_vector()) fail("concat expects vectors");
        total += s.rows;
      }
      out.shape = Shape{total, 1};
      out.value.reserve(total);
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        out.value.insert(out.value.end(), in(k).begin(), in(k).end());
      }
      break;
    }

    case OpKind::kMean: {
      for (const Shape& s : shapes) {
        if (!(s == shapes[0])) fail("mean expects equal shapes");
      }
      out.shape = shapes[0];
      out.value.assign(out.shape.size(), 0.0);
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto& x = in(k);
        for (std::size_t i = 0; i < x.size(); ++i) out.value[i] += x[i];
      }
      const double n = static_cast<double>(inputs.size());
      for (double& v : out.value) v /= n;
      break;
    }
  }
  return append(std::move(out));
}

NodeId Tape::constant(double value) {
  return constant(Shape{1, 1}, {value});
}

NodeId Tape::constant(std::vector<double> values) {
  const Shape shape{values.size(), 1};
  return constant(shape, std::move(values));
}

NodeId Tape::constant(Shape shape, std::vector<double> values) {
  Payload p;
  p.shape = shape;
  p.values = std::move(values);
  return emit(OpKind::kConstant, {}, p);
}

NodeId Tape::parameter(const ParameterStore& store, const std::string& name) {
  if (auto it = parameter_cache_.find(name); it != parameter_cache_.end()) {
    return it->second;
  }
  const auto& entry = store.at(name);
  Payload p;
  p.shape = entry.shape;
  p.values = entry.values;
  const NodeId id = emit(
      entry.trainable ? OpKind::kParameter : OpKind::kConstant, {}, p);
  if (entry.trainable) parameters_.emplace_back(id, name);
  parameter_cache_.emplace(name, id);
  return id;
}

NodeId Tape::add(NodeId a, NodeId b) {
  const NodeId in[] = {a, b};
  return emit(OpKind::kAdd, in);
}
NodeId Tape::sub(NodeId a, NodeId b) {
  const NodeId in[] = {a, b};
  return emit(OpKind::kSub, in);
}
NodeId Tape::mul(NodeId a, NodeId b) {
  const NodeId in[] = {a, b};
  return emit(OpKind::kMul, in);
}
NodeId Tape::div(NodeId a, NodeId b) {
  const NodeId in[] = {a, b};
  return emit(OpKind::kDiv, in);
}
NodeId Tape::neg(NodeId a) { return emit(OpKind::kNeg, {&a, 1}); }
NodeId Tape::exp(NodeId a) { return emit(OpKind::kExp, {&a, 1}); }
NodeId Tape::log(NodeId a) { return emit(OpKind::kLog, {&a, 1}); }
NodeId Tape::sigmoid(NodeId a) { return emit(OpKind::kSigmoid, {&a, 1}); }
NodeId Tape::tanh(NodeId a) { return emit(OpKind::kTanh, {&a, 1}); }
NodeId Tape::dot(NodeId a, NodeId b) {
  const NodeId in[] = {a, b};
  return emit(OpKind::kDot, in);
}
NodeId Tape::cosine_similarity(NodeId a, NodeId b) {
  const NodeId in[] = {a, b};
  return emit(OpKind::kCosineSimilarity, in);
}
NodeId Tape::softmax(NodeId a) { return emit(OpKind::kSoftmax, {&a, 1}); }
NodeId Tape::max_reduce(NodeId a) {
  return emit(OpKind::kMaxReduce, {&a, 1});
}
NodeId Tape::clamp(NodeId a, double lo, double hi) {
  Payload p;
  p.lo = lo;
  p.hi = hi;
  return emit(OpKind::kClamp, {&a, 1}, p);
}
NodeId Tape::stop_gradient(NodeId a) {
  return emit(OpKind::kStopGradient, {&a, 1});
}
NodeId Tape::sum_reduce(NodeId a) {
  return emit(OpKind::kSumReduce, {&a, 1});
}
NodeId Tape::matvec(NodeId matrix, NodeId vector) {
  const NodeId in[] = {matrix, vector};
  return emit(OpKind::kMatVec, in);
}
NodeId Tape::index(NodeId vector, std::size_t i) {
  Payload p;
  p.index = i;
  return emit(OpKind::kIndex, {&vector, 1}, p);
}
NodeId Tape::concat(std::span<const NodeId> parts) {
  return emit(OpKind::kConcat, parts);
}
NodeId Tape::mean(std::span<const NodeId> parts) {
  return emit(OpKind::kMean, parts);
}

// ---------------------------------------------------------------------------
// Tape: backward

Gradients Tape::backward(NodeId loss) const {
  const Node& root = node(loss);
  if (!root.shape.is_scalar()) {
    throw std::logic_error("backward needs a scalar loss, got shape " +
                           to_string(root.shape));
  }
  std::vector<std::vector<double>> adj(nodes_.size());
  adj[loss.index] = {1.0};

  for (std::size_t k = loss.index + 1; k-- > 0;) {
    if (adj[k].empty()) continue;
    const Node& n = nodes_[k];
    const std::vector<double>& g = adj[k];
    auto input = [&](std::size_t j) -> const Node& {
      return nodes_[n.inputs[j].index];
    };

    switch (n.kind) {
      case OpKind::kConstant:
      case OpKind::kParameter:
      case OpKind::kStopGradient:
        break;

      case OpKind::kAdd:
      case OpKind::kSub:
      case OpKind::kMul:
      case OpKind::kDiv: {
        const Node& a = input(0);
        const Node& b = input(1);
        const std::size_t sa = a.value.size();
        const std::size_t sb = b.value.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double u = at(a.value, i);
          const double v = at(b.value, i);
          double da = 0.0;
          double db = 0.0;
          switch (n.kind) {
            case OpKind::kAdd: da = g[i]; db = g[i]; break;
            case OpKind::kSub: da = g[i]; db = -g[i]; break;
            case OpKind::kMul: da = g[i] * v; db = g[i] * u; break;
            default: da = g[i] / v; db = -g[i] * u / (v * v); break;
          }
          push(adj, n.inputs[0], sa, i, da);
          push(adj, n.inputs[1], sb, i, db);
        }
        break;
      }

      case OpKind::kNeg:
      case OpKind::kExp:
      case OpKind::kLog:
      case OpKind::kSigmoid:
      case OpKind::kTanh:
      case OpKind::kClamp: {
        const Node& a = input(0);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double x = a.value[i];
          const double y = n.value[i];
          double d = 0.0;
          switch (n.kind) {
            case OpKind::kNeg: d = -1.0; break;
            case OpKind::kExp: d = y; break;
            case OpKind::kLog: d = 1.0 / x; break;
            case OpKind::kSigmoid: d = y * (1.0 - y); break;
            case OpKind::kTanh: d = 1.0 - y * y; break;
            default: d = (x >= n.lo && x <= n.hi) ? 1.0 : 0.0; break;
          }
          push(adj, n.inputs[0], g.size(), i, g[i] * d);
        }
        break;
      }

      case OpKind::kDot: {
        const Node& a = input(0);
        const Node& b = input(1);
        for (std::size_t i = 0; i < a.value.size(); ++i) {
          push(adj, n.inputs[0], a.value.size(), i, g[0] * b.value[i]);
          push(adj, n.inputs[1], b.value.size(), i, g[0] * a.value[i]);
        }
        break;
      }

      case OpKind::kCosineSimilarity: {
        const Node& a = input(0);
        const Node& b = input(1);
        const double na = norm(a.value);
        const double nb = norm(b.value);
        const double cos = n.value[0];
        for (std::size_t i = 0; i < a.value.size(); ++i) {
          const double da =
              b.value[i] / (na * nb) - cos * a.value[i] / (na * na);
          const double db =
              a.value[i] / (na * nb) - cos * b.value[i] / (nb * nb);
          push(adj, n.inputs[0], a.value.size(), i, g[0] * da);
          push(adj, n.inputs[1], b.value.size(), i, g[0] * db);
        }
        break;
      }

      case OpKind::kSoftmax: {
        const auto& s = n.value;
        const double sg = std::inner_product(s.begin(), s.end(), g.begin(), 0.0);
        for (std::size_t i = 0; i < s.size(); ++i) {
          push(adj, n.inputs[0], s.size(), i, s[i] * (g[i] - sg));
        }
        break;
      }

      case OpKind::kMaxReduce:
      case OpKind::kIndex: {
        const std::size_t size = input(0).value.size();
        push(adj, n.inputs[0], size, n.index, g[0]);
        break;
      }

      case OpKind::kSumReduce: {
        const std::size_t size = input(0).value.size();
        for (std::size_t i = 0; i < size; ++i) {
          push(adj, n.inputs[0], size, i, g[0]);
        }
        break;
      }

      case OpKind::kMatVec: {
        const Node& m = input(0);
        const Node& x = input(1);
        const std::size_t rows = m.shape.rows;
        const std::size_t cols = m.shape.cols;
        auto& gm = adj[n.inputs[0].index];
        if (gm.empty()) gm.assign(m.value.size(), 0.0);
        auto& gx = adj[n.inputs[1].index];
        if (gx.empty()) gx.assign(x.value.size(), 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
          const double gr = g[r];
          if (gr == 0.0) continue;
          const double* row = m.value.data() + r * cols;
          double* grow = gm.data() + r * cols;
          for (std::size_t c = 0; c < cols; ++c) {
            grow[c] += gr * x.value[c];
            gx[c] += gr * row[c];
          }
        }
        break;
      }

      case OpKind::kConcat: {
        std::size_t offset = 0;
        for (std::size_t j = 0; j < n.inputs.size(); ++j) {
          const std::size_t size = input(j).value.size();
          for (std::size_t i = 0; i < size; ++i) {
            push(adj, n.inputs[j], size, i, g[offset + i]);
          }
          offset += size;
        }
        break;
      }

      case OpKind::kMean: {
        const double inv = 1.0 / static_cast<double>(n.inputs.size());
        for (NodeId id : n.inputs) {
          for (std::size_t i = 0; i < g.size(); ++i) {
            push(adj, id, g.size(), i, g[i] * inv);
          }
        }
        break;
      }
    }
  }
  return Gradients(*this, std::move(adj));
}

// ---------------------------------------------------------------------------
// Gradients

std::vector<double> Gradients::adjoint(NodeId id) const {
  const auto& a = adjoints_.at(id.index);
  if (a.empty()) {
    return std::vector<double>(tape_->shape(id).size(), 0.0);
  }
  return a;
}

double Gradients::scalar(NodeId id) const {
  const auto& a = adjoints_.at(id.index);
  return a.empty() ? 0.0 : a[0];
}

GradientMap Gradients::parameters() const {
  GradientMap out;
  for (const auto& [id, name] : tape_->parameters()) {
    out[name] = adjoint(id);
  }
  return out;
}

void accumulate(GradientMap& into, const GradientMap& from, double scale) {
  for (const auto& [name, g] : from) {
    auto& target = into[name];
    if (target.empty()) target.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) target[i] += scale * g[i];
  }
}

// ---------------------------------------------------------------------------
// Finite differences

FiniteDifferenceReport finite_difference_check(const GraphBuilder& build,
                                               const ParameterStore& params,
                                               double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("finite difference step must be positive");
  }
  FiniteDifferenceReport report;

  Tape tape;
  const NodeId loss = build(tape, params);
  if (!std::isfinite(tape.scalar(loss))) {
    report.finite = false;
    return report;
  }
  const GradientMap analytic = tape.backward(loss).parameters();

  auto evaluate = [&](const ParameterStore& p) {
    Tape t;
    return t.scalar(build(t, p));
  };

  ParameterStore probe = params;
  for (const auto& [name, entry] : params.entries()) {
    if (!entry.trainable) continue;
    auto it = analytic.find(name);
    for (std::size_t i = 0; i < entry.values.size(); ++i) {
      auto values = probe.mutable_values(name);
      const double original = values[i];
      double plus = 0.0;
      double minus = 0.0;
      try {
        values[i] = original + epsilon;
        plus = evaluate(probe);
        values[i] = original - epsilon;
        minus = evaluate(probe);
      } catch (const DomainError&) {
        report.finite = false;
      }
      values[i] = original;
      if (!std::isfinite(plus) || !std::isfinite(minus)) report.finite = false;
      if (!report.finite) {
        report.worst_parameter = name;
        report.worst_index = i;
        return report;
      }
      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double exact = it == analytic.end() ? 0.0 : it->second[i];
      const double err =
          std::abs(exact - numeric) / std::max(1.0, std::abs(numeric));
      if (err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_parameter = name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

}  // namespace rulenet
