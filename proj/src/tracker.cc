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

#include "rulenet/tracker.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rulenet {

namespace {

constexpr const char* kInputWeight = "recurrence/W_x";
constexpr const char* kHiddenWeight = "recurrence/W_h";
constexpr const char* kHiddenBias = "recurrence/b";
constexpr const char* kCheckpointFormat = "rulenet-checkpoint";

// Normal(0, 1) scaled by 1/sqrt(fan_in).
std::vector<double> scaled_normal(std::mt19937_64& rng, std::size_t count,
                                  std::size_t fan_in) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::vector<double> out(count);
  for (double& v : out) v = normal(rng) * scale;
  return out;
}

}  // namespace

TrackerModel::TrackerModel(Ontology ontology, const EmbeddingTable& vocabulary,
                           const TrackerOptions& options)
    : ontology_(std::move(ontology)),
      embed_dim_(options.embed_dim),
      hidden_dim_(options.hidden_dim) {
  if (embed_dim_ == 0 || hidden_dim_ == 0) {
    throw std::invalid_argument("tracker dimensions must be positive");
  }
  if (vocabulary.size() > 0 && vocabulary.dim() != embed_dim_) {
    throw std::invalid_argument(
        "embedding table dimension " + std::to_string(vocabulary.dim()) +
        " does not match tracker embed_dim " + std::to_string(embed_dim_));
  }
  std::mt19937_64 rng(options.seed);
  for (const auto& word : vocabulary.words()) {
    params_.create(embedding_name(word), Shape{embed_dim_, 1},
                   vocabulary.lookup(word), options.train_embeddings);
  }
  params_.create(kInputWeight, Shape{hidden_dim_, embed_dim_},
                 scaled_normal(rng, hidden_dim_ * embed_dim_, embed_dim_));
  params_.create(kHiddenWeight, Shape{hidden_dim_, hidden_dim_},
                 scaled_normal(rng, hidden_dim_ * hidden_dim_, hidden_dim_));
  params_.create(kHiddenBias, Shape{hidden_dim_, 1},
                 std::vector<double>(hidden_dim_, 0.0));
  for (const SlotInfo& slot : ontology_.slots()) {
    const std::size_t width = slot.width();
    params_.create(head_weight_name(slot), Shape{width, hidden_dim_},
                   scaled_normal(rng, width * hidden_dim_, hidden_dim_));
    std::vector<double> bias(width, 0.0);
    bias[slot.none_index()] = options.none_bias;
    params_.create(head_bias_name(slot), Shape{width, 1}, std::move(bias));
  }
}

std::string TrackerModel::embedding_name(std::string_view word) {
  return "embed/" + std::string(word);
}
std::string TrackerModel::head_weight_name(const SlotInfo& slot) {
  return "head/" + slot.key() + "/W";
}
std::string TrackerModel::head_bias_name(const SlotInfo& slot) {
  return "head/" + slot.key() + "/b";
}

NodeId TrackerModel::embed(Tape& tape, std::string_view word) const {
  const std::string name = embedding_name(word);
  if (params_.contains(name)) return tape.parameter(params_, name);
  return tape.constant(hashed_vector(word, embed_dim_));
}

std::vector<NodeId> TrackerModel::embed_tokens(
    Tape& tape, std::span<const std::string> tokens) const {
  std::vector<NodeId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(embed(tape, t));
  return out;
}

NodeId TrackerModel::initial_context(Tape& tape) const {
  return tape.constant(std::vector<double>(hidden_dim_, 0.0));
}

NodeId TrackerModel::encode_turn(Tape& tape, std::span<const NodeId> user,
                                 std::span<const NodeId> system,
                                 NodeId prev_context) const {
  std::vector<NodeId> words(user.begin(), user.end());
  words.insert(words.end(), system.begin(), system.end());
  const NodeId pooled =
      words.empty() ? tape.constant(std::vector<double>(embed_dim_, 0.0))
                    : tape.mean(words);
  const NodeId wx = tape.matvec(tape.parameter(params_, kInputWeight), pooled);
  const NodeId wh =
      tape.matvec(tape.parameter(params_, kHiddenWeight), prev_context);
  const NodeId pre = tape.add(tape.add(wx, wh),
                              tape.parameter(params_, kHiddenBias));
  return tape.tanh(pre);
}

std::vector<NodeId> TrackerModel::predict_belief(Tape& tape,
                                                 NodeId context) const {
  std::vector<NodeId> out;
  out.reserve(ontology_.slot_count());
  for (const SlotInfo& slot : ontology_.slots()) {
    const NodeId logits =
        tape.add(tape.matvec(tape.parameter(params_, head_weight_name(slot)),
                             context),
                 tape.parameter(params_, head_bias_name(slot)));
    out.push_back(tape.softmax(logits));
  }
  return out;
}

std::string TrackerModel::to_checkpoint() const {
  nlohmann::ordered_json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["embed_dim"] = embed_dim_;
  doc["hidden_dim"] = hidden_dim_;
  doc["ontology"] = nlohmann::ordered_json::parse(ontology_.to_json());
  auto& params = doc["parameters"];
  params = nlohmann::ordered_json::object();
  for (const auto& [name, entry] : params_.entries()) {
    params[name] = {{"shape", {entry.shape.rows, entry.shape.cols}},
                    {"trainable", entry.trainable},
                    {"values", entry.values}};
  }
  return doc.dump();
}

TrackerModel TrackerModel::from_checkpoint(std::string_view text) {
  const auto doc = nlohmann::ordered_json::parse(text);
  if (doc.value("format", "") != kCheckpointFormat) {
    throw std::runtime_error("not a rulenet checkpoint");
  }
  const int version = doc.at("version").get<int>();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  }
  TrackerModel model;
  model.embed_dim_ = doc.at("embed_dim").get<std::size_t>();
  model.hidden_dim_ = doc.at("hidden_dim").get<std::size_t>();
  model.ontology_ = Ontology::parse(doc.at("ontology").dump());
  for (const auto& [name, entry] : doc.at("parameters").items()) {
    const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 2) {
      throw std::runtime_error("parameter " + name + " has a malformed shape");
    }
    model.params_.create(name, Shape{shape[0], shape[1]},
                         entry.at("values").get<std::vector<double>>(),
                         entry.at("trainable").get<bool>());
  }
  return model;
}

void TrackerModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << to_checkpoint() << '\n';
}

TrackerModel TrackerModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_checkpoint(buffer.str());
}

BeliefState read_belief(const Tape& tape, std::span<const NodeId> belief) {
  BeliefState out;
  out.reserve(belief.size());
  for (NodeId id : belief) {
    const auto v = tape.value(id);
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

std::size_t argmax(std::span<const double> distribution) {
  return static_cast<std::size_t>(
      std::max_element(distribution.begin(), distribution.end()) -
      distribution.begin());
}

NodeId supervised_loss(Tape& tape, std::span<const NodeId> belief,
                       std::span<const std::size_t> gold,
                       const std::vector<bool>& supervised) {
  if (gold.size() != belief.size() || supervised.size() != belief.size()) {
    throw std::invalid_argument("labels and mask must cover every slot");
  }
  std::vector<NodeId> terms;
  for (std::size_t i = 0; i < belief.size(); ++i) {
    if (!supervised[i]) continue;
    const NodeId p = tape.clamp(tape.index(belief[i], gold[i]),
                                kProbabilityFloor, 1.0 - kProbabilityFloor);
    terms.push_back(tape.neg(tape.log(p)));
  }
  if (terms.empty()) return tape.constant(0.0);
  return tape.mean(terms);
}

NodeId total_loss(Tape& tape, NodeId supervised, NodeId rules, double weight) {
  return tape.add(supervised, tape.mul(tape.constant(weight), rules));
}

}  // namespace rulenet
