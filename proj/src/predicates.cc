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

#include "rulenet/predicates.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rulenet {

void PredicateConfig::validate() const {
  if (!(sharpness > 0.0)) {
    throw std::invalid_argument("predicate sharpness must be positive");
  }
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw std::invalid_argument("predicate threshold must lie in [-1, 1]");
  }
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be > 0");
}

void EmbeddingTable::set(const std::string& word, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw std::invalid_argument("embedding for '" + word + "' has dimension " +
                                std::to_string(vector.size()) + ", expected " +
                                std::to_string(dim_));
  }
  const double sq = std::inner_product(vector.begin(), vector.end(),
                                       vector.begin(), 0.0);
  if (sq == 0.0) {
    throw std::invalid_argument("embedding for '" + word + "' is zero");
  }
  auto [it, inserted] = vectors_.insert_or_assign(word, std::move(vector));
  if (inserted) words_.push_back(word);
}

bool EmbeddingTable::contains(std::string_view word) const {
  return vectors_.find(word) != vectors_.end();
}

std::vector<double> EmbeddingTable::lookup(std::string_view word) const {
  auto it = vectors_.find(word);
  if (it != vectors_.end()) return it->second;
  return hashed_vector(word, dim_);
}

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) {
      throw std::runtime_error("embedding line " + std::to_string(line_no) +
                               ": malformed number");
    }
    if (table.dim_ == 0) {
      if (values.empty()) {
        throw std::runtime_error("embedding line " + std::to_string(line_no) +
                                 ": no vector");
      }
      table.dim_ = values.size();
    }
    if (values.size() != table.dim_) {
      throw std::runtime_error("embedding line " + std::to_string(line_no) +
                               ": expected " + std::to_string(table.dim_) +
                               " values, got " + std::to_string(values.size()));
    }
    table.set(word, std::move(values));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file " + path);
  return parse(in);
}

void EmbeddingTable::write(std::ostream& out) const {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& word : words_) {
    out << word;
    for (double v : vectors_.at(word)) out << ' ' << v;
    out << '\n';
  }
}

void EmbeddingTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding file " + path);
  write(out);
}

std::vector<double> hashed_vector(std::string_view word, std::size_t dim) {
  // FNV-1a keeps the seed stable across standard library implementations.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : word) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::mt19937_64 rng(h);
  std::vector<double> v(dim);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& x : v) {
      x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      sq += x * x;
    }
  } while (sq == 0.0);
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
  return v;
}

logic::TruthValue contains_word_like(Tape& tape,
                                     std::span<const NodeId> utterance,
                                     std::span<const double> concept_vector,
                                     double threshold, double sharpness) {
  if (utterance.empty()) return logic::truth(tape, tape.constant(0.0));
  const NodeId target =
      tape.constant(std::vector<double>(concept_vector.begin(), concept_vector.end()));
  std::vector<NodeId> sims;
  sims.reserve(utterance.size());
  for (NodeId word : utterance) {
    sims.push_back(tape.cosine_similarity(word, target));
  }
  const NodeId best = tape.max_reduce(tape.concat(sims));
  const NodeId margin = tape.sub(best, tape.constant(threshold));
  return logic::truth(
      tape, tape.sigmoid(tape.mul(tape.constant(sharpness), margin)));
}

logic::TruthValue assert_state(Tape& tape, NodeId slot_belief,
                               std::size_t value_index) {
  return logic::truth(tape, tape.index(slot_belief, value_index));
}

logic::TruthValue prev_assert_state(Tape& tape, NodeId prev_slot_belief,
                                    std::size_t value_index) {
  return logic::truth(
      tape, tape.index(tape.stop_gradient(prev_slot_belief), value_index));
}

}  // namespace rulenet
