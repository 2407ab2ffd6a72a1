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

// rulenet: generate corpora, train and evaluate the tracker, sweep the rules'
// weight, and check rule files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rulenet/data.h"
#include "rulenet/harness.h"
#include "rulenet/ruledsl.h"
#include "rulenet/tracker.h"

namespace fs = std::filesystem;
using namespace rulenet;

namespace {

struct ModelOptions {
  std::string corpus;
  std::string ontology;
  std::string embeddings;
  std::string rules;
  std::string config;
  std::vector<std::string> overrides;
  bool print_config = false;
};

void add_model_options(CLI::App* cmd, ModelOptions& o) {
  cmd->add_option("--corpus", o.corpus, "Directory with train/dev/test.jsonl");
  cmd->add_option("--ontology", o.ontology,
                  "Ontology JSON (default: <corpus>/ontology.json)");
  cmd->add_option("--embeddings", o.embeddings,
                  "Word vectors (default: <corpus>/embeddings.txt)");
  cmd->add_option("--rules", o.rules, "Rule file; omit to train without rules");
  cmd->add_option("--config", o.config, "key = value training config");
  cmd->add_option("--set", o.overrides, "Config override key=value")
      ->take_all();
  cmd->add_flag("--print-config", o.print_config,
                "Print the effective config and exit");
}

TrainConfig effective_config(const ModelOptions& o) {
  TrainConfig cfg = o.config.empty() ? TrainConfig{} : TrainConfig::load(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string or_default(const std::string& value, const std::string& corpus,
                       const char* file) {
  if (!value.empty()) return value;
  if (corpus.empty()) {
    throw std::invalid_argument(std::string("no --corpus to find ") + file);
  }
  return (fs::path(corpus) / file).string();
}

struct Inputs {
  TrainConfig config;
  Ontology ontology;
  EmbeddingTable embeddings;
  Corpora corpora;
  std::optional<logic::RuleSet> rules;
};

Inputs load_inputs(const ModelOptions& o) {
  Inputs in;
  in.config = effective_config(o);
  if (o.corpus.empty()) throw std::invalid_argument("--corpus is required");
  in.ontology = Ontology::load(or_default(o.ontology, o.corpus, "ontology.json"));
  in.embeddings =
      EmbeddingTable::load(or_default(o.embeddings, o.corpus, "embeddings.txt"));
  in.corpora = load_corpora(o.corpus);
  check_labels(in.corpora.train, in.ontology);
  check_labels(in.corpora.dev, in.ontology);
  check_labels(in.corpora.test, in.ontology);
  if (!o.rules.empty()) {
    const auto symbols =
        dsl::default_symbols(in.ontology, in.embeddings, in.config.predicate);
    in.rules = dsl::make_rule_set(dsl::load_rules(o.rules, symbols),
                                  in.config.rules_weight);
  }
  return in;
}

void print_scores(const MetricsReport& r, const std::string& withheld) {
  std::printf("%-24s %6s %6s %6s %7s %7s %7s\n", "slot", "tp", "fp", "fn",
              "P", "R", "F1");
  for (const auto& [key, s] : r.slots) {
    std::printf("%-24s %6zu %6zu %6zu %7.3f %7.3f %7.3f\n", key.c_str(), s.tp,
                s.fp, s.fn, s.precision(), s.recall(), s.f1());
  }
  if (!withheld.empty()) {
    std::printf("withheld (%s) F1  %.4f\n", withheld.c_str(), r.withheld_f1);
    std::printf("remaining F1       %.4f\n", r.remaining_f1);
  }
  std::printf("all-slot F1        %.4f\n", r.all_f1);
}

bool has_frozen(const dsl::Formula& f) {
  if (f.kind == dsl::Formula::Kind::kFrozen) return true;
  for (const auto& child : f.children) {
    if (has_frozen(child)) return true;
  }
  return false;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    const double w = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("bad weight '" + item + "'");
    }
    out.push_back(w);
  }
  return out;
}

// ---------------------------------------------------------------------------

int run_generate(const std::string& spec_path, const std::string& ontology_path,
                 const std::string& out, bool print_spec) {
  CorpusSpec spec = spec_path.empty() ? CorpusSpec::defaults()
                                      : CorpusSpec::load(spec_path);
  if (print_spec) {
    std::cout << spec.to_text();
    return 0;
  }
  if (out.empty()) throw std::invalid_argument("--out is required");
  const Ontology ontology =
      ontology_path.empty() ? default_ontology() : Ontology::load(ontology_path);
  const Corpora corpora = generate(spec, ontology);
  save_corpora(out, corpora);
  build_embeddings(spec, ontology).save((fs::path(out) / "embeddings.txt").string());
  std::ofstream(fs::path(out) / "ontology.json") << ontology.to_json() << '\n';
  std::cout << "wrote " << corpora.train.dialogs.size() << " train, "
            << corpora.dev.dialogs.size() << " dev, "
            << corpora.test.dialogs.size() << " test dialogs to " << out
            << '\n';
  return 0;
}

int run_train(const ModelOptions& o, const std::string& out) {
  if (o.print_config) {
    std::cout << effective_config(o).to_text();
    return 0;
  }
  if (out.empty()) throw std::invalid_argument("--out is required");
  Inputs in = load_inputs(o);
  fs::create_directories(out);
  std::ofstream epochs(fs::path(out) / "epochs.csv");
  epochs << "epoch,supervised,rules,total,dev_f1\n";
  auto result = train(
      in.config, in.corpora, in.ontology, in.embeddings,
      in.rules ? &*in.rules : nullptr,
      [&](const EpochLog& log, const TrackerModel&) {
        epochs << log.epoch << ',' << log.supervised << ',' << log.rules << ','
               << log.total << ',' << log.dev_f1 << '\n';
        std::printf("epoch %3zu  sup %.4f  rules %.4f  total %.4f  dev F1 %.4f\n",
                    log.epoch, log.supervised, log.rules, log.total, log.dev_f1);
        std::fflush(stdout);
      });
  result.model.save((fs::path(out) / "model.json").string());
  std::ofstream(fs::path(out) / "config.conf") << in.config.to_text();
  std::printf("kept epoch %zu; dev scores:\n", result.best_epoch);
  print_scores(result.report, in.config.withhold_slot);
  return 0;
}

int run_eval(const std::string& model_path, const std::string& corpus,
             const std::string& split, const std::string& slots) {
  const TrackerModel model = TrackerModel::load(model_path);
  const Corpus data = load_corpus((fs::path(corpus) / (split + ".jsonl")).string());
  check_labels(data, model.ontology());
  const std::string withheld = slots == "all" ? "" : slots;
  if (!withheld.empty() && model.ontology().slots_named(withheld).empty()) {
    throw std::invalid_argument("ontology has no slot named '" + withheld + "'");
  }
  print_scores(evaluate_f1(model, data, withheld), withheld);
  return 0;
}

int run_sweep(const ModelOptions& o, const std::string& weights,
              std::size_t repeats, const std::string& out) {
  if (o.print_config) {
    std::cout << effective_config(o).to_text();
    return 0;
  }
  if (o.rules.empty()) throw std::invalid_argument("--rules is required");
  Inputs in = load_inputs(o);
  const auto ws = parse_weights(weights);
  const auto report = weight_sweep(
      in.config, ws, repeats, in.corpora, in.ontology, in.embeddings, *in.rules,
      [](const SweepRow& r) {
        std::printf("w=%-6g seed=%-4llu withheld %.4f  remaining %.4f  dev %.4f\n",
                    r.weight, static_cast<unsigned long long>(r.seed),
                    r.withheld_f1, r.remaining_f1, r.dev_f1);
        std::fflush(stdout);
      });
  std::cout << report.summary();
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream(fs::path(out) / "sweep.csv") << report.to_csv();
    std::ofstream(fs::path(out) / "summary.txt") << report.summary();
  }
  return 0;
}

int run_check_rules(const std::string& rules_path,
                    const std::string& ontology_path,
                    const std::string& embeddings_path) {
  const Ontology ontology = ontology_path.empty() ? default_ontology()
                                                  : Ontology::load(ontology_path);
  const EmbeddingTable embeddings = embeddings_path.empty()
                                        ? EmbeddingTable(16)
                                        : EmbeddingTable::load(embeddings_path);
  std::ifstream in(rules_path);
  if (!in) throw std::runtime_error("cannot open rule file " + rules_path);
  std::stringstream text;
  text << in.rdbuf();
  try {
    const auto decls = dsl::parse_rules(text.str());
    const auto rules = dsl::resolve_all(
        decls, dsl::default_symbols(ontology, embeddings, PredicateConfig{}));
    for (const auto& r : rules) {
      std::cout << r.name << ": " << dsl::to_string(r.formula) << '\n';
    }
    std::cout << rules.size() << " rules ok\n";
  } catch (const dsl::DslError& e) {
    std::cerr << rules_path << ':' << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_gradcheck(std::uint64_t seed, const std::string& rules_path,
                  double tolerance) {
  CorpusSpec spec = CorpusSpec::defaults();
  spec.seed = seed;
  spec.train_dialogs = 1;
  spec.dev_dialogs = 0;
  spec.test_dialogs = 0;
  spec.min_turns = 2;
  spec.max_turns = 2;
  const Ontology ontology = default_ontology();
  const EmbeddingTable lexicon = build_embeddings(spec, ontology);
  const Corpus corpus = generate(spec, ontology).train;
  const Dialog& dialog = corpus.dialogs.front();

  // Model vocabulary restricted to the dialog keeps the check small.
  EmbeddingTable vocab(lexicon.dim());
  for (const Turn& t : dialog.turns) {
    for (const auto* side : {&t.user, &t.system}) {
      for (const auto& w : *side) {
        if (!vocab.contains(w)) vocab.set(w, lexicon.lookup(w));
      }
    }
  }
  TrackerOptions options;
  options.seed = seed;
  options.hidden_dim = 8;
  const TrackerModel model(ontology, vocab, options);
  const auto symbols = dsl::default_symbols(ontology, lexicon, PredicateConfig{});
  const auto compiled = dsl::load_rules(rules_path, symbols);
  // A FROZEN subformula over trainable embeddings still moves under finite
  // differences, so that binding is checked on the FROZEN-free rules.
  std::vector<dsl::CompiledRule> unfrozen;
  for (const auto& r : compiled) {
    if (!has_frozen(r.formula)) unfrozen.push_back(r);
  }

  std::cout << "dialog " << dialog.id << ":\n";
  for (const Turn& t : dialog.turns) {
    std::cout << "  user:";
    for (const auto& w : t.user) std::cout << ' ' << w;
    std::cout << '\n';
  }
  bool ok = true;
  for (const bool fixed_lexicon : {true, false}) {
    const auto rules =
        dsl::make_rule_set(fixed_lexicon ? compiled : unfrozen, 1.0);
    const auto report = dialog_gradient_check(
        model, dialog, corpus, &rules, fixed_lexicon ? &lexicon : nullptr);
    std::printf("%-30s %2zu rules  max rel err %.3e  (%s[%zu])\n",
                fixed_lexicon ? "UTTERANCE = fixed lexicon"
                              : "UTTERANCE = model embeddings",
                rules.size(), report.max_relative_error,
                report.worst_parameter.c_str(), report.worst_index);
    ok = ok && report.passed(tolerance);
  }
  std::cout << (ok ? "gradients ok\n" : "gradient mismatch\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rulenet: rule-regularised dialog state tracking"};
  app.require_subcommand(1);

  std::string spec_path, gen_ontology, gen_out;
  bool print_spec = false;
  auto* gen = app.add_subcommand("generate", "Write a synthetic corpus");
  gen->add_option("--spec", spec_path, "Corpus spec (key = value)");
  gen->add_option("--ontology", gen_ontology, "Ontology JSON (default built in)");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_flag("--print-spec", print_spec, "Print the effective spec and exit");

  ModelOptions train_opts;
  std::string train_out;
  auto* tr = app.add_subcommand("train", "Train a tracker");
  add_model_options(tr, train_opts);
  tr->add_option("--out", train_out, "Output directory");

  std::string model_path, eval_corpus, split = "test", slots = "all";
  auto* ev = app.add_subcommand("eval", "Score a checkpoint");
  ev->add_option("--model", model_path, "Checkpoint")->required();
  ev->add_option("--corpus", eval_corpus, "Corpus directory")->required();
  ev->add_option("--split", split, "train, dev or test")
      ->check(CLI::IsMember({"train", "dev", "test"}));
  ev->add_option("--slots", slots,
                 "'all', or a slot name to report as the withheld group");

  ModelOptions sweep_opts;
  std::string weights = "0,1,3,10,30", sweep_out;
  std::size_t repeats = 3;
  auto* sw = app.add_subcommand("sweep", "Train across rules' weights");
  add_model_options(sw, sweep_opts);
  sw->add_option("--weights", weights, "Comma-separated weights");
  sw->add_option("--repeats", repeats, "Seeds per weight")
      ->check(CLI::PositiveNumber);
  sw->add_option("--out", sweep_out, "Directory for sweep.csv and summary.txt");

  std::string check_rules_path, check_ontology, check_embeddings;
  auto* cr = app.add_subcommand("check-rules", "Parse and resolve a rule file");
  cr->add_option("--rules", check_rules_path, "Rule file")->required();
  cr->add_option("--ontology", check_ontology, "Ontology JSON (default built in)");
  cr->add_option("--embeddings", check_embeddings, "Word vectors");

  std::uint64_t gc_seed = 1;
  std::string gc_rules = "rules/pricerange.rules";
  double gc_tol = 1e-4;
  auto* gc = app.add_subcommand(
      "gradcheck", "Finite-difference check of a 2-turn dialog loss with rules");
  gc->add_option("--seed", gc_seed, "Seed for the dialog and model");
  gc->add_option("--rules", gc_rules, "Rule file");
  gc->add_option("--tolerance", gc_tol, "Max relative error");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_generate(spec_path, gen_ontology, gen_out, print_spec);
    if (*tr) return run_train(train_opts, train_out);
    if (*ev) return run_eval(model_path, eval_corpus, split, slots);
    if (*sw) return run_sweep(sweep_opts, weights, repeats, sweep_out);
    if (*cr) return run_check_rules(check_rules_path, check_ontology, check_embeddings);
    if (*gc) return run_gradcheck(gc_seed, gc_rules, gc_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
