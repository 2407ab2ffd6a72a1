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

// Predicates a rule can apply to graph nodes: soft keyword matching over
// utterance embeddings and reads of belief-state probabilities.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulenet/autodiff.h"
#include "rulenet/logic.h"

namespace rulenet {

struct PredicateConfig {
  // Cosine similarity a word must exceed to count as "like" the concept.
  double threshold = 0.7;
  // Slope of the sigmoid that softens the threshold. Must be positive.
  double sharpness = 20.0;

  void validate() const;
};

// Word vectors of a fixed dimension. Unknown words map to a deterministic
// pseudo-random vector derived from the word itself.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim);

  // Throws std::invalid_argument for a wrong dimension or a zero vector.
  void set(const std::string& word, std::vector<double> vector);

  bool contains(std::string_view word) const;
  std::vector<double> lookup(std::string_view word) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  // Words in insertion order.
  const std::vector<std::string>& words() const { return words_; }

  // GloVe-style text: one "word v1 ... vd" per line. The dimension is taken
  // from the first line.
  static EmbeddingTable parse(std::istream& in);
  static EmbeddingTable load(const std::string& path);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::map<std::string, std::vector<double>, std::less<>> vectors_;
};

// Unit-norm vector seeded by a hash of `word`; identical on every call.
std::vector<double> hashed_vector(std::string_view word, std::size_t dim);

// sigmoid(k * (max_i cos(utterance_i, concept) - t)). An empty utterance
// yields the constant 0.
logic::TruthValue contains_word_like(Tape& tape,
                                     std::span<const NodeId> utterance,
                                     std::span<const double> concept_vector,
                                     double threshold, double sharpness);

// Probability of `value_index` in a per-slot belief distribution node.
logic::TruthValue assert_state(Tape& tape, NodeId slot_belief,
                               std::size_t value_index);

// Same read against the previous turn's distribution, behind a gradient
// stop so nothing flows back into the previous turn.
logic::TruthValue prev_assert_state(Tape& tape, NodeId prev_slot_belief,
                                    std::size_t value_index);

}  // namespace rulenet
