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

// A small recurrent belief-state tracker.
//
// Each turn mean-pools the embeddings of the user and system tokens, updates
// a dialog context
//
//   context_t = tanh(W_x * pool_t + W_h * context_{t-1} + b)
//
// and reads one softmax per (domain, slot) over the slot's values plus NONE.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rulenet/autodiff.h"
#include "rulenet/ontology.h"
#include "rulenet/predicates.h"

namespace rulenet {

// Per-slot probability vectors, values first and NONE last.
using BeliefState = std::vector<std::vector<double>>;

struct TrackerOptions {
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 32;
  bool train_embeddings = true;
  // Initial bias of every NONE logit. Positive values make an untrained head
  // predict NONE.
  double none_bias = 0.0;
  std::uint64_t seed = 1;
};

class TrackerModel {
 public:
  TrackerModel() = default;

  // Creates parameters for every word of `vocabulary` (initialised from the
  // table), the recurrence and one head per ontology slot.
  TrackerModel(Ontology ontology, const EmbeddingTable& vocabulary,
               const TrackerOptions& options);

  const Ontology& ontology() const { return ontology_; }
  std::size_t embed_dim() const { return embed_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }

  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }

  static std::string embedding_name(std::string_view word);
  static std::string head_weight_name(const SlotInfo& slot);
  static std::string head_bias_name(const SlotInfo& slot);

  // Embedding node of a word; unknown words become constant hashed vectors.
  NodeId embed(Tape& tape, std::string_view word) const;
  std::vector<NodeId> embed_tokens(Tape& tape,
                                   std::span<const std::string> tokens) const;

  NodeId initial_context(Tape& tape) const;

  // One recurrence step. Either token list may be empty; if both are, the
  // pooled input is the zero vector.
  NodeId encode_turn(Tape& tape, std::span<const NodeId> user,
                     std::span<const NodeId> system, NodeId prev_context) const;

  // One softmax node per ontology slot.
  std::vector<NodeId> predict_belief(Tape& tape, NodeId context) const;

  // Structured-text checkpoint (JSON, versioned).
  std::string to_checkpoint() const;
  static TrackerModel from_checkpoint(std::string_view text);
  void save(const std::string& path) const;
  static TrackerModel load(const std::string& path);

  friend bool operator==(const TrackerModel& a, const TrackerModel& b) {
    return a.embed_dim_ == b.embed_dim_ && a.hidden_dim_ == b.hidden_dim_ &&
           a.ontology_ == b.ontology_ && a.params_ == b.params_;
  }

 private:
  Ontology ontology_;
  std::size_t embed_dim_ = 0;
  std::size_t hidden_dim_ = 0;
  ParameterStore params_;
};

inline constexpr int kCheckpointVersion = 1;

BeliefState read_belief(const Tape& tape, std::span<const NodeId> belief);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> distribution);

// Bounds applied to probabilities before taking a log.
inline constexpr double kProbabilityFloor = 1e-7;

// Mean over supervised slots of -log p(gold). `gold[i]` indexes into slot
// i's distribution (NONE is values.size()). Slots with `supervised[i]`
// false are skipped; with none supervised the loss is a constant 0.
NodeId supervised_loss(Tape& tape, std::span<const NodeId> belief,
                       std::span<const std::size_t> gold,
                       const std::vector<bool>& supervised);

// supervised + weight * rules.
NodeId total_loss(Tape& tape, NodeId supervised, NodeId rules, double weight);

}  // namespace rulenet
