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

// Dialog corpora: a template-based synthetic generator, the withheld-slot
// supervision mask and line-delimited JSON I/O.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rulenet/ontology.h"
#include "rulenet/predicates.h"

namespace rulenet {

// "domain-slot" -> value, or nullopt for NONE. A missing key carries no
// label at all.
using Labels = std::map<std::string, std::optional<std::string>>;

struct Turn {
  std::vector<std::string> user;
  std::vector<std::string> system;
  Labels labels;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Dialog {
  std::string id;
  std::vector<Turn> turns;

  friend bool operator==(const Dialog&, const Dialog&) = default;
};

struct Corpus {
  std::vector<Dialog> dialogs;
  // "domain-slot" keys whose labels must not be used for supervision.
  std::set<std::string> masked;

  bool supervised(const std::string& slot_key) const {
    return !masked.contains(slot_key);
  }
  std::size_t turn_count() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct Corpora {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// A constraint stated in one turn, as chosen by the generator.
struct Mention {
  std::string domain;
  std::string slot;
  std::string value;
};

// What the generator decided for each turn, before realisation. Used to
// audit the gold labels.
struct DialogPlan {
  std::string id;
  std::vector<std::vector<Mention>> turns;
};

struct CorpusSpec {
  std::uint64_t seed = 7;
  std::size_t train_dialogs = 600;
  std::size_t dev_dialogs = 100;
  std::size_t test_dialogs = 200;
  std::size_t min_turns = 2;
  std::size_t max_turns = 5;
  // Share of domain goals that carry a price range.
  double price_rate = 0.7;
  double multi_domain_rate = 0.2;
  // Share of price mentions that also name the domain.
  double price_with_domain_rate = 0.9;
  std::size_t embed_dim = 16;
  // Surface words for each ontology value and each domain name. Every
  // value or domain missing here is realised as itself.
  std::map<std::string, std::vector<std::string>> synonyms;

  static CorpusSpec defaults();
  // Flat "key = value" text; unknown keys are an error. Synonym lists are
  // written as "synonyms.<name> = w1 w2 w3".
  static CorpusSpec parse(std::istream& in);
  static CorpusSpec load(const std::string& path);
  std::string to_text() const;
  void validate() const;
};

// Hotel and restaurant domains with pricerange, area and stars or food.
Ontology default_ontology();

struct GeneratedCorpora {
  Corpora corpora;
  std::vector<DialogPlan> plans;  // train, then dev, then test
};

GeneratedCorpora generate_with_plans(const CorpusSpec& spec,
                                     const Ontology& ontology);
Corpora generate(const CorpusSpec& spec, const Ontology& ontology);

// Every word the generator can emit.
std::vector<std::string> vocabulary(const CorpusSpec& spec,
                                    const Ontology& ontology);

// Word vectors where synonyms share a direction (pairwise cosine >= 0.85)
// and words of different clusters stay apart (cosine <= 0.3).
EmbeddingTable build_embeddings(const CorpusSpec& spec,
                                const Ontology& ontology);

// Masks every (domain, slot) whose slot name is `slot_name` in the training
// split. Dev and test keep their labels. Throws std::invalid_argument if no
// ontology slot has that name.
Corpora withhold_slot(Corpora corpora, const Ontology& ontology,
                      std::string_view slot_name);
Corpus withhold_slot(Corpus corpus, const Ontology& ontology,
                     std::string_view slot_name);

// Number of (turn, masked slot) label positions.
std::size_t masked_label_count(const Corpus& corpus);

// Thrown by the loaders for malformed records.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string dialog_to_json(const Dialog& dialog);
Dialog dialog_from_json(std::string_view line);

void write_corpus(std::ostream& out, const Corpus& corpus);
Corpus read_corpus(std::istream& in);
void save_corpus(const std::string& path, const Corpus& corpus);
Corpus load_corpus(const std::string& path);

// A directory with train.jsonl, dev.jsonl and test.jsonl.
void save_corpora(const std::string& dir, const Corpora& corpora);
Corpora load_corpora(const std::string& dir);

// Checks every label refers to an ontology slot and value.
void check_labels(const Corpus& corpus, const Ontology& ontology);

}  // namespace rulenet
