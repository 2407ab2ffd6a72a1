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

// Training, evaluation and weight sweeps for the tracker.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rulenet/autodiff.h"
#include "rulenet/data.h"
#include "rulenet/logic.h"
#include "rulenet/predicates.h"
#include "rulenet/tracker.h"

namespace rulenet {

struct TrainConfig {
  double rules_weight = 0.0;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t epochs = 60;
  std::uint64_t seed = 1;
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 32;
  PredicateConfig predicate;
  bool train_embeddings = true;
  // Initial NONE logit bias of every head; keeps unsupervised heads at NONE.
  double none_bias = 6.0;
  // Slot name whose training labels are withheld; empty keeps all labels.
  std::string withhold_slot = "pricerange";
  // Threads computing per-dialog gradients. Results do not depend on it.
  std::size_t workers = 1;

  // "key = value" lines, '#' comments. Unknown keys are an error.
  // Keys not mentioned keep their value in `base`.
  static TrainConfig parse(std::istream& in, TrainConfig base);
  static TrainConfig parse(std::istream& in);
  static TrainConfig load(const std::string& path, TrainConfig base);
  static TrainConfig load(const std::string& path);
  // Applies one "key=value" override.
  void set(const std::string& key, const std::string& value);
  std::string to_text() const;
  void validate() const;

  TrackerOptions tracker_options() const;
};

// ---------------------------------------------------------------------------
// Adam

struct OptimizerState {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::map<std::string, std::vector<double>> first;
  std::map<std::string, std::vector<double>> second;
};

// Thrown when a gradient or loss stops being finite.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One bias-corrected Adam update of every trainable parameter. Parameters
// missing from `grads` get a zero gradient. Throws NonFiniteError naming the
// first parameter with a non-finite gradient, before anything is modified.
void adam_step(ParameterStore& params, const GradientMap& grads,
               OptimizerState& state);

// ---------------------------------------------------------------------------
// Per-dialog objective

// Per-slot gold index (NONE is values.size()) and whether it supervises.
struct TurnTargets {
  std::vector<std::size_t> gold;
  std::vector<bool> supervised;
};

// Targets for one turn; missing or masked labels are unsupervised.
TurnTargets turn_targets(const Ontology& ontology, const Turn& turn,
                         const Corpus& corpus);

// Belief fed to PREV_BELIEF at the first turn: all mass on NONE.
BeliefState none_belief(const Ontology& ontology);


struct DialogOutcome {
  double supervised = 0.0;  // summed over turns
  double rules = 0.0;       // summed over turns, unweighted
  double total = 0.0;
  std::size_t turns = 0;
  GradientMap gradients;    // of `total`
  std::vector<BeliefState> beliefs;
};

// Emits the dialog's loss, summed over turns, onto `tape`. UTTERANCE is bound
// to constant vectors from `lexicon` when given, otherwise to the model's own
// embedding nodes. Fills `outcome` (values and beliefs, no gradients) when
// given. An empty dialog has loss 0.
// PREV_BELIEF at turn t > 0 is the model's own belief at t-1 read as a
// constant, or `prev_beliefs[t-1]` when that is given.
NodeId dialog_loss(Tape& tape, const TrackerModel& model, const Dialog& dialog,
                   const Corpus& corpus, const logic::RuleSet* rules,
                   const EmbeddingTable* lexicon,
                   DialogOutcome* outcome = nullptr,
                   const std::vector<BeliefState>* prev_beliefs = nullptr);

// Central-difference check of dialog_loss over every trainable parameter.
// The previous beliefs are held at their unperturbed values, since they are
// constants to the analytic gradient.
FiniteDifferenceReport dialog_gradient_check(const TrackerModel& model,
                                             const Dialog& dialog,
                                             const Corpus& corpus,
                                             const logic::RuleSet* rules,
                                             const EmbeddingTable* lexicon,
                                             double epsilon = 1e-5);

// Runs a dialog on one tape. The context carries gradient between turns;
// the previous belief enters as a constant.
DialogOutcome run_dialog(const TrackerModel& model, const Dialog& dialog,
                         const Corpus& corpus, const logic::RuleSet* rules,
                         bool with_gradients,
                         const EmbeddingTable* lexicon = nullptr);

// Predicted beliefs only.
std::vector<BeliefState> predict_dialog(const TrackerModel& model,
                                        const Dialog& dialog);

// ---------------------------------------------------------------------------
// Scoring

struct SlotScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
};

// One scored turn-slot: predicted and gold values, nullopt being NONE.
struct Judgement {
  std::optional<std::string> predicted;
  std::optional<std::string> gold;
};

void tally(SlotScore& score, const Judgement& j);

struct EpochLog {
  std::size_t epoch = 0;
  double supervised = 0.0;  // per turn
  double rules = 0.0;       // per turn, unweighted
  double total = 0.0;       // per turn
  double dev_f1 = 0.0;
};

struct MetricsReport {
  std::map<std::string, SlotScore> slots;  // "domain-slot"
  double withheld_f1 = 0.0;
  double remaining_f1 = 0.0;
  double all_f1 = 0.0;
  std::vector<EpochLog> epochs;
};

// Slot keys are grouped as withheld when their slot name is `withheld`.
// Group scores are means of per-slot F1; an empty group scores 0.
void summarise(MetricsReport& report, const Ontology& ontology,
               const std::string& withheld);

// Scores the argmax of each belief against every labeled slot in `corpus`.
// `beliefs[d][t]` is the belief state of turn t of dialog d.
MetricsReport score_beliefs(const Ontology& ontology, const Corpus& corpus,
                            const std::vector<std::vector<BeliefState>>& beliefs,
                            const std::string& withheld);

// score_beliefs over the model's own predictions.
MetricsReport evaluate_f1(const TrackerModel& model, const Corpus& corpus,
                          const std::string& withheld);

// ---------------------------------------------------------------------------
// Training

struct TrainResult {
  TrackerModel model;
  MetricsReport report;  // epochs filled, scores on dev of the kept model
  std::size_t best_epoch = 0;
};

// Called after each epoch.
using EpochCallback =
    std::function<void(const EpochLog&, const TrackerModel&)>;

// Minibatch Adam on the tracker. `rules` are applied at config.rules_weight
// whatever weight the set carries. A null `rules` trains on the supervised
// loss alone and runs no logic code. The model kept is the one with
// the best dev all-slot F1 (first one on ties).
TrainResult train(const TrainConfig& config, const Corpora& corpora,
                  const Ontology& ontology, const EmbeddingTable& embeddings,
                  const logic::RuleSet* rules,
                  const EpochCallback& on_epoch = {});

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
  double weight = 0.0;
  std::uint64_t seed = 0;
  double withheld_f1 = 0.0;   // test
  double remaining_f1 = 0.0;  // test
  double dev_f1 = 0.0;        // dev all-slot F1 of the kept model
};

struct SweepCell {
  double weight = 0.0;
  double withheld_mean = 0.0;
  double withheld_spread = 0.0;  // half the min-max range
  double remaining_mean = 0.0;
  double remaining_spread = 0.0;
  double dev_mean = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SweepCell> cells;  // in weight order as given
  // Nonzero weight with the best mean test withheld F1.
  std::optional<double> best_weight;
  // Nonzero weight with the best mean dev all-slot F1. Chosen without
  // looking at test scores.
  std::optional<double> operating_weight;

  const SweepCell* cell(double weight) const;
  // "w,seed,slot-group,F1" lines with a header.
  std::string to_csv() const;
  std::string summary() const;
};

using RunCallback = std::function<void(const SweepRow&)>;

// Trains one model per (weight, seed) with seeds config.seed ..
// config.seed + repeats - 1 and scores each on the test split. Weight 0 runs
// without rules; other weights use `rules` reweighted. Rows come out
// in (weight, seed) order whatever the worker count.
SweepReport weight_sweep(const TrainConfig& config,
                         const std::vector<double>& weights,
                         std::size_t repeats, const Corpora& corpora,
                         const Ontology& ontology,
                         const EmbeddingTable& embeddings,
                         const logic::RuleSet& rules,
                         const RunCallback& on_run = {});

}  // namespace rulenet
