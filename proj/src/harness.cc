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

#include "rulenet/harness.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "rulenet/ruledsl.h"

namespace rulenet {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is
// handled by exactly one thread; callers write results to slot i.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void TrainConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "rules_weight") rules_weight = std::stod(value);
    else if (key == "learning_rate") learning_rate = std::stod(value);
    else if (key == "batch_size") batch_size = std::stoul(value);
    else if (key == "epochs") epochs = std::stoul(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "embed_dim") embed_dim = std::stoul(value);
    else if (key == "hidden_dim") hidden_dim = std::stoul(value);
    else if (key == "threshold") predicate.threshold = std::stod(value);
    else if (key == "sharpness") predicate.sharpness = std::stod(value);
    else if (key == "train_embeddings") train_embeddings = parse_bool(value);
    else if (key == "none_bias") none_bias = std::stod(value);
    else if (key == "withhold_slot") withhold_slot = value;
    else if (key == "workers") workers = std::stoul(value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("value out of range for '" + key + "'");
  } catch (const std::invalid_argument& e) {
    if (std::string_view(e.what()).starts_with("unknown")) throw;
    throw std::invalid_argument("bad value for '" + key + "': " + value);
  }
}

TrainConfig TrainConfig::parse(std::istream& in, TrainConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    try {
      base.set(trim(std::string_view(line).substr(0, eq)),
               trim(std::string_view(line).substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  base.validate();
  return base;
}

TrainConfig TrainConfig::parse(std::istream& in) {
  return parse(in, TrainConfig{});
}

TrainConfig TrainConfig::load(const std::string& path) {
  return load(path, TrainConfig{});
}

TrainConfig TrainConfig::load(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  return parse(in, std::move(base));
}

std::string TrainConfig::to_text() const {
  std::ostringstream out;
  out << "rules_weight = " << format_double(rules_weight) << '\n'
      << "learning_rate = " << format_double(learning_rate) << '\n'
      << "batch_size = " << batch_size << '\n'
      << "epochs = " << epochs << '\n'
      << "seed = " << seed << '\n'
      << "embed_dim = " << embed_dim << '\n'
      << "hidden_dim = " << hidden_dim << '\n'
      << "threshold = " << format_double(predicate.threshold) << '\n'
      << "sharpness = " << format_double(predicate.sharpness) << '\n'
      << "train_embeddings = " << (train_embeddings ? "true" : "false") << '\n'
      << "none_bias = " << format_double(none_bias) << '\n'
      << "withhold_slot = " << withhold_slot << '\n'
      << "workers = " << workers << '\n';
  return out.str();
}

void TrainConfig::validate() const {
  if (!(rules_weight >= 0.0) || !std::isfinite(rules_weight)) {
    throw std::invalid_argument("rules_weight must be finite and >= 0");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning_rate must be finite and > 0");
  }
  if (batch_size == 0) throw std::invalid_argument("batch_size must be > 0");
  if (embed_dim == 0 || hidden_dim == 0) {
    throw std::invalid_argument("embed_dim and hidden_dim must be > 0");
  }
  if (!std::isfinite(none_bias)) {
    throw std::invalid_argument("none_bias must be finite");
  }
  if (workers == 0) throw std::invalid_argument("workers must be > 0");
  predicate.validate();
}

TrackerOptions TrainConfig::tracker_options() const {
  TrackerOptions o;
  o.embed_dim = embed_dim;
  o.hidden_dim = hidden_dim;
  o.train_embeddings = train_embeddings;
  o.none_bias = none_bias;
  o.seed = seed;
  return o;
}

// ---------------------------------------------------------------------------
// Adam

void adam_step(ParameterStore& params, const GradientMap& grads,
               OptimizerState& state) {
  for (const auto& [name, g] : grads) {
    for (double v : g) {
      if (!std::isfinite(v)) {
        throw NonFiniteError("non-finite gradient for parameter " + name);
      }
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (const auto& [name, entry] : params.entries()) {
    if (!entry.trainable) continue;
    const auto found = grads.find(name);
    const std::vector<double>* g = found == grads.end() ? nullptr : &found->second;
    if (g && g->size() != entry.values.size()) {
      throw std::invalid_argument("gradient for " + name + " has the wrong size");
    }
    auto& m = state.first[name];
    auto& v = state.second[name];
    m.resize(entry.values.size(), 0.0);
    v.resize(entry.values.size(), 0.0);
    auto values = params.mutable_values(name);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double gi = g ? (*g)[i] : 0.0;
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      values[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

// ---------------------------------------------------------------------------
// Dialog objective

TurnTargets turn_targets(const Ontology& ontology, const Turn& turn,
                         const Corpus& corpus) {
  TurnTargets out;
  out.gold.reserve(ontology.slot_count());
  out.supervised.reserve(ontology.slot_count());
  for (const SlotInfo& slot : ontology.slots()) {
    const std::string key = slot.key();
    const auto label = turn.labels.find(key);
    if (label == turn.labels.end() || !corpus.supervised(key)) {
      out.gold.push_back(slot.none_index());
      out.supervised.push_back(false);
      continue;
    }
    std::size_t gold = slot.none_index();
    if (label->second) {
      const auto it = std::find(slot.values.begin(), slot.values.end(),
                                *label->second);
      if (it == slot.values.end()) {
        throw std::invalid_argument("label " + key + "=" + *label->second +
                                    " is not in the ontology");
      }
      gold = static_cast<std::size_t>(it - slot.values.begin());
    }
    out.gold.push_back(gold);
    out.supervised.push_back(true);
  }
  return out;
}

BeliefState none_belief(const Ontology& ontology) {
  BeliefState out;
  for (const SlotInfo& slot : ontology.slots()) {
    std::vector<double> p(slot.width(), 0.0);
    p[slot.none_index()] = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

NodeId dialog_loss(Tape& tape, const TrackerModel& model, const Dialog& dialog,
                   const Corpus& corpus, const logic::RuleSet* rules,
                   const EmbeddingTable* lexicon, DialogOutcome* outcome,
                   const std::vector<BeliefState>* prev_beliefs) {
  const Ontology& ontology = model.ontology();
  DialogOutcome scratch;
  DialogOutcome& out = outcome ? *outcome : scratch;
  NodeId context = model.initial_context(tape);
  BeliefState prev = none_belief(ontology);
  std::vector<NodeId> turn_losses;
  for (const Turn& turn : dialog.turns) {
    const auto user = model.embed_tokens(tape, turn.user);
    const auto system = model.embed_tokens(tape, turn.system);
    context = model.encode_turn(tape, user, system, context);
    const auto belief = model.predict_belief(tape, context);
    const TurnTargets targets = turn_targets(ontology, turn, corpus);
    const NodeId sup =
        supervised_loss(tape, belief, targets.gold, targets.supervised);
    out.supervised += tape.scalar(sup);
    NodeId loss = sup;
    if (rules) {
      std::vector<NodeId> prev_nodes;
      prev_nodes.reserve(prev.size());
      for (const auto& p : prev) prev_nodes.push_back(tape.constant(p));
      logic::EvalContext bindings;
      if (lexicon) {
        std::vector<NodeId> words;
        words.reserve(turn.user.size());
        for (const auto& w : turn.user) {
          words.push_back(tape.constant(lexicon->lookup(w)));
        }
        bindings.emplace(std::string(dsl::kUtterance), std::move(words));
      } else {
        bindings.emplace(std::string(dsl::kUtterance), user);
      }
      bindings.emplace(std::string(dsl::kBelief), belief);
      bindings.emplace(std::string(dsl::kPrevBelief), std::move(prev_nodes));
      const NodeId rl = logic::rules_loss(tape, *rules, bindings);
      out.rules += tape.scalar(rl);
      loss = total_loss(tape, sup, rl, rules->weight());
    }
    turn_losses.push_back(loss);
    out.beliefs.push_back(read_belief(tape, belief));
    prev = prev_beliefs ? prev_beliefs->at(out.beliefs.size() - 1)
                        : out.beliefs.back();
  }
  out.turns = dialog.turns.size();
  if (turn_losses.empty()) return tape.constant(0.0);
  NodeId total = turn_losses.front();
  for (std::size_t i = 1; i < turn_losses.size(); ++i) {
    total = tape.add(total, turn_losses[i]);
  }
  out.total = tape.scalar(total);
  return total;
}

FiniteDifferenceReport dialog_gradient_check(const TrackerModel& model,
                                             const Dialog& dialog,
                                             const Corpus& corpus,
                                             const logic::RuleSet* rules,
                                             const EmbeddingTable* lexicon,
                                             double epsilon) {
  DialogOutcome base;
  {
    Tape tape;
    dialog_loss(tape, model, dialog, corpus, rules, lexicon, &base);
  }
  TrackerModel probe = model;
  return finite_difference_check(
      [&](Tape& tape, const ParameterStore& params) {
        probe.params() = params;
        return dialog_loss(tape, probe, dialog, corpus, rules, lexicon, nullptr,
                           &base.beliefs);
      },
      model.params(), epsilon);
}

DialogOutcome run_dialog(const TrackerModel& model, const Dialog& dialog,
                         const Corpus& corpus, const logic::RuleSet* rules,
                         bool with_gradients, const EmbeddingTable* lexicon) {
  DialogOutcome out;
  Tape tape;
  const NodeId total =
      dialog_loss(tape, model, dialog, corpus, rules, lexicon, &out);
  if (!std::isfinite(out.total)) {
    throw NonFiniteError("non-finite loss on dialog " + dialog.id);
  }
  if (with_gradients && out.turns > 0) {
    out.gradients = tape.backward(total).parameters();
  }
  return out;
}

std::vector<BeliefState> predict_dialog(const TrackerModel& model,
                                        const Dialog& dialog) {
  Tape tape;
  NodeId context = model.initial_context(tape);
  std::vector<BeliefState> out;
  for (const Turn& turn : dialog.turns) {
    const auto user = model.embed_tokens(tape, turn.user);
    const auto system = model.embed_tokens(tape, turn.system);
    context = model.encode_turn(tape, user, system, context);
    out.push_back(read_belief(tape, model.predict_belief(tape, context)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scoring

double SlotScore::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double SlotScore::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double SlotScore::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

void tally(SlotScore& score, const Judgement& j) {
  if (j.predicted) {
    if (j.predicted == j.gold) {
      ++score.tp;
    } else {
      ++score.fp;
    }
  } else if (j.gold) {
    ++score.fn;
  }
}

void summarise(MetricsReport& report, const Ontology& ontology,
               const std::string& withheld) {
  double w_sum = 0.0, r_sum = 0.0;
  std::size_t w_n = 0, r_n = 0;
  for (const SlotInfo& slot : ontology.slots()) {
    const auto it = report.slots.find(slot.key());
    const double f1 = it == report.slots.end() ? 0.0 : it->second.f1();
    if (!withheld.empty() && slot.slot == withheld) {
      w_sum += f1;
      ++w_n;
    } else {
      r_sum += f1;
      ++r_n;
    }
  }
  report.withheld_f1 = w_n ? w_sum / static_cast<double>(w_n) : 0.0;
  report.remaining_f1 = r_n ? r_sum / static_cast<double>(r_n) : 0.0;
  report.all_f1 = w_n + r_n ? (w_sum + r_sum) / static_cast<double>(w_n + r_n)
                            : 0.0;
}

MetricsReport score_beliefs(const Ontology& ontology, const Corpus& corpus,
                            const std::vector<std::vector<BeliefState>>& beliefs,
                            const std::string& withheld) {
  if (beliefs.size() != corpus.dialogs.size()) {
    throw std::invalid_argument("one belief sequence per dialog expected");
  }
  MetricsReport report;
  for (const SlotInfo& slot : ontology.slots()) report.slots[slot.key()];
  for (std::size_t d = 0; d < corpus.dialogs.size(); ++d) {
    const Dialog& dialog = corpus.dialogs[d];
    if (beliefs[d].size() != dialog.turns.size()) {
      throw std::invalid_argument("dialog " + dialog.id +
                                  ": one belief per turn expected");
    }
    for (std::size_t t = 0; t < dialog.turns.size(); ++t) {
      const Turn& turn = dialog.turns[t];
      for (std::size_t s = 0; s < ontology.slot_count(); ++s) {
        const SlotInfo& slot = ontology.slot(s);
        const auto label = turn.labels.find(slot.key());
        if (label == turn.labels.end()) continue;
        const std::size_t pick = argmax(beliefs[d][t].at(s));
        Judgement j;
        if (pick != slot.none_index()) j.predicted = slot.values[pick];
        j.gold = label->second;
        tally(report.slots[slot.key()], j);
      }
    }
  }
  summarise(report, ontology, withheld);
  return report;
}

MetricsReport evaluate_f1(const TrackerModel& model, const Corpus& corpus,
                          const std::string& withheld) {
  std::vector<std::vector<BeliefState>> beliefs;
  beliefs.reserve(corpus.dialogs.size());
  for (const Dialog& dialog : corpus.dialogs) {
    beliefs.push_back(predict_dialog(model, dialog));
  }
  return score_beliefs(model.ontology(), corpus, beliefs, withheld);
}

// ---------------------------------------------------------------------------
// Training

TrainResult train(const TrainConfig& config, const Corpora& corpora,
                  const Ontology& ontology, const EmbeddingTable& embeddings,
                  const logic::RuleSet* rules, const EpochCallback& on_epoch) {
  config.validate();
  std::optional<logic::RuleSet> weighted;
  if (rules) {
    weighted = *rules;
    weighted->set_weight(config.rules_weight);
  }
  const logic::RuleSet* active = weighted ? &*weighted : nullptr;

  Corpus train_split = corpora.train;
  if (!config.withhold_slot.empty()) {
    train_split = withhold_slot(std::move(train_split), ontology,
                                config.withhold_slot);
  }

  TrainResult result;
  result.model = TrackerModel(ontology, embeddings, config.tracker_options());
  ParameterStore best = result.model.params();
  double best_f1 = -1.0;

  OptimizerState opt;
  opt.learning_rate = config.learning_rate;
  std::vector<std::size_t> order(train_split.dialogs.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(config.seed * 1000003ull + epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochLog log;
    log.epoch = epoch;
    std::size_t epoch_turns = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<DialogOutcome> outcomes(end - start);
      parallel_for(outcomes.size(), config.workers, [&](std::size_t i) {
        outcomes[i] = run_dialog(result.model,
                                 train_split.dialogs[order[start + i]],
                                 train_split, active, true, &embeddings);
      });
      std::size_t batch_turns = 0;
      for (const auto& o : outcomes) batch_turns += o.turns;
      if (batch_turns == 0) continue;
      GradientMap grads;
      const double scale = 1.0 / static_cast<double>(batch_turns);
      for (const auto& o : outcomes) {
        accumulate(grads, o.gradients, scale);
        log.supervised += o.supervised;
        log.rules += o.rules;
        log.total += o.total;
      }
      epoch_turns += batch_turns;
      adam_step(result.model.params(), grads, opt);
    }
    if (epoch_turns > 0) {
      const double n = static_cast<double>(epoch_turns);
      log.supervised /= n;
      log.rules /= n;
      log.total /= n;
    }
    log.dev_f1 = evaluate_f1(result.model, corpora.dev, config.withhold_slot).all_f1;
    if (log.dev_f1 > best_f1) {
      best_f1 = log.dev_f1;
      best = result.model.params();
      result.best_epoch = epoch;
    }
    result.report.epochs.push_back(log);
    if (on_epoch) on_epoch(log, result.model);
  }
  if (config.epochs > 0) result.model.params() = best;
  auto epochs = std::move(result.report.epochs);
  result.report = evaluate_f1(result.model, corpora.dev, config.withhold_slot);
  result.report.epochs = std::move(epochs);
  return result;
}

// ---------------------------------------------------------------------------
// Sweep

const SweepCell* SweepReport::cell(double weight) const {
  for (const auto& c : cells) {
    if (c.weight == weight) return &c;
  }
  return nullptr;
}

std::string SweepReport::to_csv() const {
  std::ostringstream out;
  out << "w,seed,slot-group,F1\n";
  for (const auto& r : rows) {
    out << format_double(r.weight) << ',' << r.seed << ",withheld,"
        << format_double(r.withheld_f1) << '\n';
    out << format_double(r.weight) << ',' << r.seed << ",remaining,"
        << format_double(r.remaining_f1) << '\n';
  }
  return out.str();
}

std::string SweepReport::summary() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "     w   withheld F1        remaining F1       dev F1\n";
  for (const auto& c : cells) {
    out << std::setw(6) << std::setprecision(2) << c.weight
        << std::setprecision(3) << "   " << c.withheld_mean << " +- "
        << c.withheld_spread << "    " << c.remaining_mean << " +- "
        << c.remaining_spread << "    " << c.dev_mean << '\n';
  }
  out << std::setprecision(2);
  if (best_weight) out << "best withheld weight: " << *best_weight << '\n';
  if (operating_weight) {
    out << "operating weight (dev): " << *operating_weight << '\n';
  }
  return out.str();
}

SweepReport weight_sweep(const TrainConfig& config,
                         const std::vector<double>& weights,
                         std::size_t repeats, const Corpora& corpora,
                         const Ontology& ontology,
                         const EmbeddingTable& embeddings,
                         const logic::RuleSet& rules,
                         const RunCallback& on_run) {
  if (weights.empty()) throw std::invalid_argument("sweep needs a weight");
  if (repeats == 0) throw std::invalid_argument("sweep needs repeats >= 1");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("sweep weights must be finite and >= 0");
    }
  }
  SweepReport report;
  report.rows.resize(weights.size() * repeats);
  const std::size_t cells = report.rows.size();
  // Cells run in parallel; each trains single-threaded.
  parallel_for(cells, config.workers, [&](std::size_t i) {
    TrainConfig cfg = config;
    cfg.workers = 1;
    cfg.rules_weight = weights[i / repeats];
    cfg.seed = config.seed + i % repeats;
    const auto trained = train(cfg, corpora, ontology, embeddings,
                               cfg.rules_weight > 0.0 ? &rules : nullptr);
    const auto test = evaluate_f1(trained.model, corpora.test, cfg.withhold_slot);
    report.rows[i] = {cfg.rules_weight, cfg.seed, test.withheld_f1,
                      test.remaining_f1, trained.report.all_f1};
    if (on_run && config.workers == 1) on_run(report.rows[i]);
  });
  if (on_run && config.workers > 1) {
    for (const auto& r : report.rows) on_run(r);
  }

  double best_test = -1.0, best_dev = -1.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    SweepCell c;
    c.weight = weights[k];
    double wmin = 1.0, wmax = 0.0, rmin = 1.0, rmax = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      const SweepRow& row = report.rows[k * repeats + r];
      c.withheld_mean += row.withheld_f1;
      c.remaining_mean += row.remaining_f1;
      c.dev_mean += row.dev_f1;
      wmin = std::min(wmin, row.withheld_f1);
      wmax = std::max(wmax, row.withheld_f1);
      rmin = std::min(rmin, row.remaining_f1);
      rmax = std::max(rmax, row.remaining_f1);
    }
    c.withheld_mean /= static_cast<double>(repeats);
    c.remaining_mean /= static_cast<double>(repeats);
    c.dev_mean /= static_cast<double>(repeats);
    c.withheld_spread = (wmax - wmin) / 2.0;
    c.remaining_spread = (rmax - rmin) / 2.0;
    if (c.weight > 0.0 && c.withheld_mean > best_test) {
      best_test = c.withheld_mean;
      report.best_weight = c.weight;
    }
    if (c.weight > 0.0 && c.dev_mean > best_dev) {
      best_dev = c.dev_mean;
      report.operating_weight = c.weight;
    }
    report.cells.push_back(c);
  }
  return report;
}

}  // namespace rulenet
