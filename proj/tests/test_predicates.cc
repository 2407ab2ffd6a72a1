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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "random_graph.h"
#include "rulenet/predicates.h"

using namespace rulenet;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double in_value(const std::vector<std::vector<double>>& words,
                const std::vector<double>& concept_vector) {
  Tape t;
  std::vector<NodeId> utt;
  for (const auto& w : words) utt.push_back(t.constant(w));
  return t.scalar(contains_word_like(t, utt, concept_vector, 0.7, 20.0).node);
}

}  // namespace

TEST_CASE("In: exact word, orthogonal words, a near synonym") {
  const std::vector<double> expensive = {1, 0, 0};
  CHECK(in_value({{0, 1, 0}, {1, 0, 0}}, expensive) ==
        doctest::Approx(sigmoid(6.0)).epsilon(1e-14));
  CHECK(sigmoid(6.0) == doctest::Approx(0.9975).epsilon(1e-4));

  const double orth = in_value({{0, 1, 0}, {0, 0, 2}}, expensive);
  CHECK(orth == doctest::Approx(sigmoid(-14.0)).epsilon(1e-12));
  CHECK(orth == doctest::Approx(8.3e-7).epsilon(0.01));

  const std::vector<double> pricey = {0.9, std::sqrt(1 - 0.81), 0.0};
  const double near = in_value({pricey}, expensive);
  CHECK(near == doctest::Approx(sigmoid(20 * (0.9 - 0.7))).epsilon(1e-12));
  CHECK(near > 0.95);
}

TEST_CASE("In: empty utterance is the constant 0") {
  Tape t;
  const auto v = contains_word_like(t, {}, std::vector<double>{1, 0}, 0.7, 20);
  CHECK(t.scalar(v.node) == 0.0);
  CHECK(t.node(v.node).kind == OpKind::kConstant);
}

TEST_CASE("In: permutation invariant and monotone in similarity") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  auto vec = [&] { return std::vector<double>{n(rng), n(rng), n(rng), n(rng)}; };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> words = {vec(), vec(), vec(), vec()};
    const auto concept_vector = vec();
    const double base = in_value(words, concept_vector);
    std::shuffle(words.begin(), words.end(), rng);
    CHECK(in_value(words, concept_vector) == base);
    // Moving a word toward the concept never lowers the truthiness.
    auto closer = words;
    for (std::size_t i = 0; i < 4; ++i) {
      closer[1][i] = 0.5 * closer[1][i] + 0.5 * concept_vector[i];
    }
    CHECK(in_value(closer, concept_vector) >= base);
  }
}

TEST_CASE("In: gradient into utterance embeddings matches differences") {
  ParameterStore p;
  p.create("a", {3, 1}, {0.8, 0.3, 0.1});
  p.create("b", {3, 1}, {-0.2, 0.9, 0.4});
  const std::vector<double> concept_vector = {1.0, 0.2, 0.0};
  auto build = [&](Tape& t, const ParameterStore& ps) {
    std::vector<NodeId> utt = {t.parameter(ps, "a"), t.parameter(ps, "b")};
    return contains_word_like(t, utt, concept_vector, 0.7, 20.0).node;
  };
  CHECK(testing::central_difference_error(build, p, 1e-6) < 1e-6);
}

TEST_CASE("Assert reads probabilities") {
  Tape t;
  const NodeId none = t.constant(std::vector<double>{0, 0, 0, 1});
  for (std::size_t v = 0; v < 3; ++v) CHECK(t.scalar(assert_state(t, none, v).node) == 0.0);
  const NodeId hot = t.constant(std::vector<double>{0, 1, 0, 0});
  CHECK(t.scalar(assert_state(t, hot, 1).node) == 1.0);
  const NodeId uniform = t.softmax(t.constant(std::vector<double>{0, 0, 0, 0}));
  CHECK(t.scalar(assert_state(t, uniform, 2).node) == doctest::Approx(0.25).epsilon(1e-15));

  double sum = 0.0;
  for (std::size_t v = 0; v < 4; ++v) sum += t.scalar(assert_state(t, uniform, v).node);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("previous-belief reads are forward-equal and gradient-free") {
  ParameterStore p;
  p.create("logits", {4, 1}, {0.3, -1.0, 2.0, 0.5});
  Tape t;
  const NodeId logits = t.parameter(p, "logits");
  const NodeId belief = t.softmax(logits);
  const auto now = assert_state(t, belief, 2);
  const auto before = prev_assert_state(t, belief, 2);
  CHECK(t.scalar(now.node) == t.scalar(before.node));
  const auto g = t.backward(before.node);
  for (double x : g.adjoint(logits)) CHECK(x == 0.0);

  Tape t2;
  const NodeId prev = t2.constant(std::vector<double>{0.05, 0.9, 0.0, 0.05});
  CHECK(t2.scalar(prev_assert_state(t2, prev, 1).node) == 0.9);
  const NodeId first_turn = t2.constant(std::vector<double>{0, 0, 0, 1});
  CHECK(t2.scalar(prev_assert_state(t2, first_turn, 0).node) == 0.0);
}

TEST_CASE("predicate config validation") {
  PredicateConfig c;
  CHECK_NOTHROW(c.validate());
  c.sharpness = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.sharpness = 20.0;
  c.threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("embedding table") {
  EmbeddingTable e(3);
  e.set("cheap", {1, 2, 3});
  CHECK_THROWS_AS(e.set("bad", {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(e.set("zero", {0, 0, 0}), std::invalid_argument);
  CHECK(e.contains("cheap"));
  CHECK(e.lookup("cheap") == std::vector<double>{1, 2, 3});

  // Unknown words: deterministic, unit norm, and word dependent.
  const auto a = e.lookup("zzz");
  CHECK(a == e.lookup("zzz"));
  CHECK(a == hashed_vector("zzz", 3));
  double norm = 0;
  for (double x : a) norm += x * x;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a != e.lookup("zzy"));
}

TEST_CASE("embedding text round trip and malformed files") {
  EmbeddingTable e(2);
  e.set("north", {0.1, -0.25});
  e.set("south", {1e-17, 3.0});
  std::stringstream buf;
  e.write(buf);
  const EmbeddingTable back = EmbeddingTable::parse(buf);
  CHECK(back.dim() == 2);
  CHECK(back.words() == e.words());
  CHECK(back.lookup("south") == e.lookup("south"));
  CHECK(back.lookup("north") == e.lookup("north"));

  std::stringstream dims("a 1 2 3\nb 1 2\n");
  CHECK_THROWS(EmbeddingTable::parse(dims));
  std::stringstream word_only("a\n");
  CHECK_THROWS(EmbeddingTable::parse(word_only));
  std::stringstream junk("a 1 x\n");
  CHECK_THROWS(EmbeddingTable::parse(junk));
}
