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

#include "rulenet/logic.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rulenet::logic {

namespace {

// Rounding slack allowed when checking the [0, 1] range.
constexpr double kRangeSlack = 1e-12;

}  // namespace

TruthValue truth(const Tape& tape, NodeId node) {
  const double v = tape.scalar(node);
  if (!(v >= -kRangeSlack && v <= 1.0 + kRangeSlack)) {
    throw std::logic_error("truthiness out of [0,1]: " + std::to_string(v));
  }
  return TruthValue{node};
}

TruthValue negate(Tape& tape, TruthValue x) {
  return truth(tape, tape.sub(tape.constant(1.0), x.node));
}

TruthValue conjoin(Tape& tape, TruthValue x, TruthValue y) {
  return truth(tape, tape.mul(x.node, y.node));
}

TruthValue disjoin(Tape& tape, TruthValue x, TruthValue y) {
  const NodeId sum = tape.add(x.node, y.node);
  return truth(tape, tape.sub(sum, tape.mul(x.node, y.node)));
}

TruthValue implies(Tape& tape, TruthValue x, TruthValue y) {
  const NodeId miss = tape.sub(tape.constant(1.0), y.node);
  return truth(tape,
               tape.sub(tape.constant(1.0), tape.mul(x.node, miss)));
}

NodeId rule_loss(Tape& tape, TruthValue r) {
  return tape.sub(tape.constant(1.0), r.node);
}

RuleSet::RuleSet(double weight) { set_weight(weight); }

void RuleSet::add(Rule rule) {
  const bool taken = std::any_of(rules_.begin(), rules_.end(),
                                 [&](const Rule& r) { return r.name == rule.name; });
  if (taken) throw std::invalid_argument("duplicate rule name: " + rule.name);
  rules_.push_back(std::move(rule));
}

void RuleSet::set_weight(double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("rules' weight must be finite and >= 0");
  }
  weight_ = weight;
}

NodeId rules_loss(Tape& tape, const RuleSet& rules,
                  const EvalContext& context) {
  if (rules.empty()) return tape.constant(0.0);
  NodeMemo memo;
  NodeId total{};
  bool first = true;
  for (const Rule& rule : rules.rules()) {
    const NodeId loss = rule_loss(tape, rule.build(tape, context, memo));
    total = first ? loss : tape.add(total, loss);
    first = false;
  }
  return total;
}

}  // namespace rulenet::logic
