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

// Product fuzzy logic over truthiness nodes.
//
//   NOT x      = 1 - x
//   x AND y    = x * y
//   x OR y     = x + y - x * y
//   x -> y     = 1 - x * (1 - y)
//
// A rule's loss is 1 - truthiness; a rule set's loss is the unweighted sum
// over its rules. The rules' weight is applied by the caller.

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rulenet/autodiff.h"

namespace rulenet::logic {

// A node whose forward value lies in [0, 1].
struct TruthValue {
  NodeId node;
};

// Named groups of graph nodes a rule can refer to, e.g. the token
// embeddings of the user utterance or the per-slot belief distributions.
using EvalContext = std::map<std::string, std::vector<NodeId>, std::less<>>;

// Wraps `node` after checking its value is a truthiness.
TruthValue truth(const Tape& tape, NodeId node);

TruthValue negate(Tape& tape, TruthValue x);
TruthValue conjoin(Tape& tape, TruthValue x, TruthValue y);
TruthValue disjoin(Tape& tape, TruthValue x, TruthValue y);
TruthValue implies(Tape& tape, TruthValue x, TruthValue y);

// 1 - truthiness.
NodeId rule_loss(Tape& tape, TruthValue r);

// Nodes already emitted during one evaluation, keyed by a description of
// the subterm. Lets rules that share an atom share its nodes.
using NodeMemo = std::map<std::string, NodeId, std::less<>>;

using RuleBuilder =
    std::function<TruthValue(Tape&, const EvalContext&, NodeMemo&)>;

struct Rule {
  std::string name;
  RuleBuilder build;
};

class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(double weight);

  // Throws std::invalid_argument on a duplicate name.
  void add(Rule rule);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  double weight() const { return weight_; }
  void set_weight(double weight);

 private:
  std::vector<Rule> rules_;
  double weight_ = 0.0;
};

// Sum over rules of 1 - truthiness. An empty set yields a constant 0. One
// memo is shared by all rules of the call.
NodeId rules_loss(Tape& tape, const RuleSet& rules, const EvalContext& context);

}  // namespace rulenet::logic
