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

// Reverse-mode automatic differentiation over an append-only tape.
//
// Every value lives as a node on a Tape. Nodes are evaluated eagerly when
// they are emitted, so the forward value of any node can be read back
// immediately. Values are dense row-major matrices of doubles; scalars are
// 1x1 and vectors are n x 1.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rulenet {

// Thrown when node inputs have incompatible shapes.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Thrown when an operation is evaluated outside its domain (log of a
// non-positive value, division by zero, cosine of a zero vector).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Shape {
  std::size_t rows = 1;
  std::size_t cols = 1;

  std::size_t size() const { return rows * cols; }
  bool is_scalar() const { return rows == 1 && cols == 1; }
  bool is_vector() const { return cols == 1; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

struct NodeId {
  std::size_t index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class OpKind {
  kConstant,
  kParameter,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kExp,
  kLog,
  kSigmoid,
  kTanh,
  kDot,
  kCosineSimilarity,
  kSoftmax,
  kMaxReduce,
  kClamp,
  kStopGradient,
  kSumReduce,
  // Structural helpers needed by the tracker.
  kMatVec,
  kIndex,
  kConcat,
  kMean,
};

std::string_view to_string(OpKind kind);

// Extra data some operations carry: the value of a constant, the bounds of
// a clamp, the element picked by an index.
struct Payload {
  std::vector<double> values;
  Shape shape;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t index = 0;
};

// Named trainable (or frozen) tensors. Shapes are fixed at creation.
class ParameterStore {
 public:
  struct Entry {
    Shape shape;
    std::vector<double> values;
    bool trainable = true;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  // Throws std::invalid_argument if the name is taken or the values do not
  // match the shape.
  void create(const std::string& name, Shape shape, std::vector<double> values,
              bool trainable = true);

  bool contains(std::string_view name) const;
  const Entry& at(std::string_view name) const;

  // Replaces the values of an existing parameter. The shape must not change.
  void assign(std::string_view name, std::span<const double> values);
  std::span<double> mutable_values(std::string_view name);

  const std::map<std::string, Entry, std::less<>>& entries() const {
    return entries_;
  }
  std::size_t trainable_count() const;
  std::size_t scalar_count() const;

  friend bool operator==(const ParameterStore&, const ParameterStore&) =
      default;

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

// Per-parameter gradients keyed by parameter name.
using GradientMap = std::map<std::string, std::vector<double>, std::less<>>;

class Gradients;

class Tape {
 public:
  struct Node {
    OpKind kind;
    std::vector<NodeId> inputs;
    Shape shape;
    std::vector<double> value;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t index = 0;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  // Generic entry point. Validates inputs, evaluates eagerly and appends.
  NodeId emit(OpKind kind, std::span<const NodeId> inputs,
              const Payload& payload = {});

  NodeId constant(double value);
  NodeId constant(std::vector<double> values);
  NodeId constant(Shape shape, std::vector<double> values);

  // Emits the named parameter of `store`. A parameter is emitted at most
  // once per tape; later calls return the same node. Frozen entries are
  // emitted as constants and are not registered.
  NodeId parameter(const ParameterStore& store, const std::string& name);

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId div(NodeId a, NodeId b);
  NodeId neg(NodeId a);
  NodeId exp(NodeId a);
  NodeId log(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId tanh(NodeId a);
  NodeId dot(NodeId a, NodeId b);
  NodeId cosine_similarity(NodeId a, NodeId b);
  NodeId softmax(NodeId a);
  NodeId max_reduce(NodeId a);
  NodeId clamp(NodeId a, double lo, double hi);
  NodeId stop_gradient(NodeId a);
  NodeId sum_reduce(NodeId a);
  NodeId matvec(NodeId matrix, NodeId vector);
  NodeId index(NodeId vector, std::size_t i);
  NodeId concat(std::span<const NodeId> parts);
  NodeId mean(std::span<const NodeId> parts);

  std::size_t size() const { return nodes_.size(); }
  bool valid(NodeId id) const { return id.index < nodes_.size(); }
  const Node& node(NodeId id) const;
  std::span<const double> value(NodeId id) const;
  double scalar(NodeId id) const;
  const Shape& shape(NodeId id) const;

  // Parameter nodes registered on this tape, in emission order.
  const std::vector<std::pair<NodeId, std::string>>& parameters() const {
    return parameters_;
  }

  // Reverse sweep from a scalar node. Throws std::logic_error otherwise.
  Gradients backward(NodeId loss) const;

 private:
  NodeId append(Node node);

  std::vector<Node> nodes_;
  std::vector<std::pair<NodeId, std::string>> parameters_;
  std::map<std::string, NodeId, std::less<>> parameter_cache_;
};

class Gradients {
 public:
  Gradients(const Tape& tape, std::vector<std::vector<double>> adjoints)
      : tape_(&tape), adjoints_(std::move(adjoints)) {}

  // Adjoint of a node; all zeros for nodes the loss does not depend on.
  std::vector<double> adjoint(NodeId id) const;
  double scalar(NodeId id) const;
  bool reached(NodeId id) const { return !adjoints_[id.index].empty(); }

  // Adjoints of every registered parameter node, keyed by name.
  GradientMap parameters() const;

 private:
  const Tape* tape_;
  std::vector<std::vector<double>> adjoints_;
};

// Adds `scale * from` into `into`, creating entries as needed.
void accumulate(GradientMap& into, const GradientMap& from, double scale = 1.0);

struct FiniteDifferenceReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  bool finite = true;

  bool passed(double tolerance) const {
    return finite && max_relative_error < tolerance;
  }
};

// Builds a scalar loss on a fresh tape from the given parameters.
using GraphBuilder = std::function<NodeId(Tape&, const ParameterStore&)>;

// Compares reverse-mode gradients against central differences over every
// trainable scalar in `params`. The error for each scalar is
// |analytic - numeric| / max(1, |numeric|).
FiniteDifferenceReport finite_difference_check(const GraphBuilder& build,
                                               const ParameterStore& params,
                                               double epsilon = 1e-5);

}  // namespace rulenet
