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

#include "rulenet/data.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace rulenet {

namespace {

using Words = std::vector<std::string>;

// Function words the templates use, grouped so each group gets its own
// direction in embedding space.
const std::vector<Words>& filler_clusters() {
  static const std::vector<Words> kClusters = {
      {"i", "a", "the", "in", "for", "me", "it", "to", "of", "be", "is",
       "that", "some", "with"},
      {"want", "need", "looking", "find", "like", "would", "prefer", "am",
       "should", "have", "make", "also", "something", "somewhere"},
      {"please", "thanks", "thank", "you", "yes", "sounds", "good", "great",
       "ok", "all", "book", "can"},
      {"how", "help", "what", "area", "there", "are", "several", "options",
       "which", "do", "price", "range", "stars", "food", "place", "one",
       "found", "matches"},
  };
  return kClusters;
}

const std::vector<Words>& system_prompts() {
  static const std::vector<Words> kPrompts = {
      {"how", "can", "i", "help"},
      {"what", "area", "would", "you", "like"},
      {"there", "are", "several", "options"},
      {"which", "one", "would", "you", "prefer"},
      {"what", "price", "range", "do", "you", "want"},
      {"i", "found", "some", "matches"},
  };
  return kPrompts;
}

const std::vector<Words>& filler_turns() {
  static const std::vector<Words> kFillers = {
      {"yes", "that", "sounds", "good"},
      {"can", "you", "book", "it", "for", "me"},
      {"thank", "you", "that", "is", "all"},
      {"ok", "great", "thanks"},
  };
  return kFillers;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
  std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
  return items[d(rng)];
}

bool chance(std::mt19937_64& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace

std::size_t Corpus::turn_count() const {
  std::size_t n = 0;
  for (const auto& d : dialogs) n += d.turns.size();
  return n;
}

// ---------------------------------------------------------------------------
// Spec

CorpusSpec CorpusSpec::defaults() {
  CorpusSpec spec;
  spec.synonyms = {
      {"expensive", {"expensive", "pricey", "upscale"}},
      {"moderate", {"moderate", "midpriced", "reasonable"}},
      {"cheap", {"cheap", "inexpensive", "budget"}},
      {"hotel", {"hotel", "guesthouse", "lodge"}},
      {"restaurant", {"restaurant", "eatery", "diner"}},
      {"north", {"north", "northern"}},
      {"south", {"south", "southern"}},
      {"east", {"east", "eastern"}},
      {"west", {"west", "western"}},
      {"centre", {"centre", "central"}},
  };
  return spec;
}

void CorpusSpec::validate() const {
  if (min_turns < 2 || max_turns < min_turns) {
    throw std::invalid_argument("turn range must satisfy 2 <= min <= max");
  }
  for (double p : {price_rate, multi_domain_rate, price_with_domain_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("rates must lie in [0, 1]");
    }
  }
  if (embed_dim == 0) throw std::invalid_argument("embed_dim must be > 0");
  std::map<std::string, std::string> owner;
  for (const auto& [name, words] : synonyms) {
    if (words.empty()) {
      throw std::invalid_argument("synonym list for '" + name + "' is empty");
    }
    for (const auto& w : words) {
      auto [it, fresh] = owner.emplace(w, name);
      if (!fresh) {
        throw std::invalid_argument("word '" + w + "' is a synonym of both '" +
                                    it->second + "' and '" + name + "'");
      }
    }
  }
}

CorpusSpec CorpusSpec::parse(std::istream& in) {
  CorpusSpec spec = defaults();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CorpusError(line_no, "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "train_dialogs") spec.train_dialogs = std::stoul(value);
      else if (key == "dev_dialogs") spec.dev_dialogs = std::stoul(value);
      else if (key == "test_dialogs") spec.test_dialogs = std::stoul(value);
      else if (key == "min_turns") spec.min_turns = std::stoul(value);
      else if (key == "max_turns") spec.max_turns = std::stoul(value);
      else if (key == "price_rate") spec.price_rate = std::stod(value);
      else if (key == "multi_domain_rate") spec.multi_domain_rate = std::stod(value);
      else if (key == "price_with_domain_rate") spec.price_with_domain_rate = std::stod(value);
      else if (key == "embed_dim") spec.embed_dim = std::stoul(value);
      else if (key.starts_with("synonyms.")) {
        std::istringstream words(value);
        Words list;
        for (std::string w; words >> w;) list.push_back(w);
        spec.synonyms[key.substr(9)] = list;
      } else {
        throw CorpusError(line_no, "unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw CorpusError(line_no, "bad value for '" + key + "': " + value);
    }
  }
  spec.validate();
  return spec;
}

CorpusSpec CorpusSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus spec " + path);
  return parse(in);
}

std::string CorpusSpec::to_text() const {
  std::ostringstream out;
  out << "seed = " << seed << '\n'
      << "train_dialogs = " << train_dialogs << '\n'
      << "dev_dialogs = " << dev_dialogs << '\n'
      << "test_dialogs = " << test_dialogs << '\n'
      << "min_turns = " << min_turns << '\n'
      << "max_turns = " << max_turns << '\n'
      << "price_rate = " << price_rate << '\n'
      << "multi_domain_rate = " << multi_domain_rate << '\n'
      << "price_with_domain_rate = " << price_with_domain_rate << '\n'
      << "embed_dim = " << embed_dim << '\n';
  for (const auto& [name, words] : synonyms) {
    out << "synonyms." << name << " =";
    for (const auto& w : words) out << ' ' << w;
    out << '\n';
  }
  return out.str();
}

Ontology default_ontology() {
  return Ontology::parse(R"({
    "hotel": {
      "pricerange": ["cheap", "moderate", "expensive"],
      "area": ["north", "south", "east", "west", "centre"],
      "stars": ["three", "four", "five"]
    },
    "restaurant": {
      "pricerange": ["cheap", "moderate", "expensive"],
      "area": ["north", "south", "east", "west", "centre"],
      "food": ["italian", "chinese", "indian", "british"]
    }
  })");
}

// ---------------------------------------------------------------------------
// Generation

namespace {

Words surface_forms(const CorpusSpec& spec, const std::string& name) {
  auto it = spec.synonyms.find(name);
  if (it != spec.synonyms.end()) return it->second;
  return {name};
}

class DialogBuilder {
 public:
  DialogBuilder(const CorpusSpec& spec, const Ontology& ontology,
                std::mt19937_64& rng)
      : spec_(spec), ontology_(ontology), rng_(rng) {}

  std::pair<Dialog, DialogPlan> build(const std::string& id) {
    const auto domains = ontology_.domains();
    std::vector<std::string> chosen = {pick(rng_, domains)};
    if (domains.size() > 1 && chance(rng_, spec_.multi_domain_rate)) {
      std::vector<std::string> rest;
      for (const auto& d : domains) {
        if (d != chosen[0]) rest.push_back(d);
      }
      chosen.push_back(pick(rng_, rest));
    }

    std::uniform_int_distribution<std::size_t> turns_dist(spec_.min_turns,
                                                          spec_.max_turns);
    const std::size_t target = turns_dist(rng_);

    // Each event becomes one user turn.
    std::vector<Event> events;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      plan_domain(chosen[k], k > 0, events);
    }
    // Never exceed the turn budget; drop trailing non-price events first.
    while (events.size() > spec_.max_turns) {
      auto victim = std::find_if(events.rbegin(), events.rend(), [](const Event& e) {
        return !e.intro && !e.has_price();
      });
      if (victim == events.rend()) {
        events.pop_back();
      } else {
        events.erase(std::next(victim).base());
      }
    }
    while (events.size() < target) {
      std::uniform_int_distribution<std::size_t> where(1, events.size());
      events.insert(events.begin() + static_cast<std::ptrdiff_t>(where(rng_)),
                    Event{});
    }
    // A stated price must stay unmentioned for at least one later turn.
    if (events.back().has_price()) {
      if (events.size() >= spec_.max_turns) {
        auto victim = std::find_if(events.begin(), events.end(), [](const Event& e) {
          return !e.intro && !e.has_price();
        });
        if (victim != events.end()) events.erase(victim);
      }
      if (events.size() < spec_.max_turns) events.push_back(Event{});
    }

    Dialog dialog;
    dialog.id = id;
    DialogPlan plan;
    plan.id = id;
    Labels state;
    for (const SlotInfo& s : ontology_.slots()) state[s.key()] = std::nullopt;
    for (std::size_t t = 0; t < events.size(); ++t) {
      Turn turn;
      if (t > 0) turn.system = pick(rng_, system_prompts());
      turn.user = realise(events[t]);
      for (const Mention& m : events[t].mentions) {
        state[m.domain + "-" + m.slot] = m.value;
      }
      turn.labels = state;
      plan.turns.push_back(events[t].mentions);
      dialog.turns.push_back(std::move(turn));
    }
    return {std::move(dialog), std::move(plan)};
  }

 private:
  struct Event {
    std::string domain;  // empty for filler turns
    bool intro = false;
    bool second = false;
    bool name_domain = false;
    std::vector<Mention> mentions;

    bool has_price() const {
      return std::any_of(mentions.begin(), mentions.end(), [](const Mention& m) {
        return m.slot == "pricerange";
      });
    }
  };

  void plan_domain(const std::string& domain, bool second,
                   std::vector<Event>& events) {
    std::vector<Mention> goal;
    for (const SlotInfo& s : ontology_.slots()) {
      if (s.domain != domain) continue;
      const double p = s.slot == "pricerange" ? spec_.price_rate
                       : s.slot == "area"     ? 0.8
                                              : 0.6;
      if (chance(rng_, p)) goal.push_back({domain, s.slot, pick(rng_, s.values)});
    }
    Event intro;
    intro.domain = domain;
    intro.intro = true;
    intro.second = second;
    intro.name_domain = true;
    std::vector<Event> later;
    for (const Mention& m : goal) {
      const bool in_intro = m.slot == "pricerange" ? chance(rng_, 0.6)
                            : m.slot == "area"     ? chance(rng_, 0.4)
                                                   : false;
      if (in_intro) {
        intro.mentions.push_back(m);
      } else {
        Event e;
        e.domain = domain;
        e.mentions.push_back(m);
        e.name_domain = m.slot == "pricerange" &&
                        chance(rng_, spec_.price_with_domain_rate);
        later.push_back(std::move(e));
      }
    }
    std::shuffle(later.begin(), later.end(), rng_);
    events.push_back(std::move(intro));
    for (auto& e : later) events.push_back(std::move(e));
  }

  std::string word_for(const std::string& name) {
    return pick(rng_, surface_forms(spec_, name));
  }

  Words realise(const Event& e) {
    if (e.domain.empty()) return pick(rng_, filler_turns());
    std::string price, area, stars, food;
    for (const Mention& m : e.mentions) {
      if (m.slot == "pricerange") price = word_for(m.value);
      else if (m.slot == "area") area = word_for(m.value);
      else if (m.slot == "stars") stars = word_for(m.value);
      else food = word_for(m.value);
    }
    Words out;
    auto say = [&out](std::initializer_list<std::string_view> words) {
      for (auto w : words) out.emplace_back(w);
    };
    if (e.intro) {
      static const std::vector<Words> kOpeners = {
          {"i", "am", "looking", "for", "a"},
          {"i", "need", "a"},
          {"can", "you", "find", "me", "a"},
      };
      out = e.second ? Words{"i", "also", "need", "a"} : pick(rng_, kOpeners);
      if (!price.empty()) out.push_back(price);
      out.push_back(word_for(e.domain));
      if (!area.empty()) say({"in", "the", area});
      if (chance(rng_, 0.3)) say({"please"});
      return out;
    }
    if (!price.empty()) {
      if (e.name_domain) {
        if (chance(rng_, 0.5)) {
          say({"i", "would", "like", "a", price, word_for(e.domain)});
        } else {
          say({"make", "it", "a", price, word_for(e.domain), "please"});
        }
      } else if (chance(rng_, 0.5)) {
        say({"something", price, "please"});
      } else {
        say({"it", "should", "be", price});
      }
      return out;
    }
    if (!area.empty()) {
      if (chance(rng_, 0.5)) {
        say({"it", "should", "be", "in", "the", area});
      } else {
        say({"somewhere", "in", "the", area, "please"});
      }
    } else if (!stars.empty()) {
      if (chance(rng_, 0.5)) {
        say({"it", "should", "have", stars, "stars"});
      } else {
        say({"i", "want", stars, "stars"});
      }
    } else {
      if (chance(rng_, 0.5)) {
        say({"i", "would", "like", food, "food"});
      } else {
        say({"i", "want", food, "food", "please"});
      }
    }
    return out;
  }

  const CorpusSpec& spec_;
  const Ontology& ontology_;
  std::mt19937_64& rng_;
};

}  // namespace

GeneratedCorpora generate_with_plans(const CorpusSpec& spec,
                                     const Ontology& ontology) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  DialogBuilder builder(spec, ontology, rng);
  GeneratedCorpora out;
  auto fill = [&](Corpus& corpus, std::string_view split, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      std::ostringstream id;
      id << split << '-' << std::setw(4) << std::setfill('0') << i;
      auto [dialog, plan] = builder.build(id.str());
      corpus.dialogs.push_back(std::move(dialog));
      out.plans.push_back(std::move(plan));
    }
  };
  fill(out.corpora.train, "train", spec.train_dialogs);
  fill(out.corpora.dev, "dev", spec.dev_dialogs);
  fill(out.corpora.test, "test", spec.test_dialogs);
  return out;
}

Corpora generate(const CorpusSpec& spec, const Ontology& ontology) {
  return generate_with_plans(spec, ontology).corpora;
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

std::vector<Words> word_clusters(const CorpusSpec& spec,
                                 const Ontology& ontology) {
  std::vector<Words> clusters;
  std::set<std::string> seen;
  auto add = [&](const std::string& name) {
    if (!seen.insert(name).second) return;
    clusters.push_back(surface_forms(spec, name));
  };
  for (const auto& d : ontology.domains()) add(d);
  for (const SlotInfo& s : ontology.slots()) {
    for (const auto& v : s.values) add(v);
  }
  for (const Words& f : filler_clusters()) clusters.push_back(f);
  return clusters;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalise(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return v;
}

// Spreads unit vectors apart by descending sum_{i<j} (c_i . c_j)^4.
std::vector<std::vector<double>> spread_directions(std::mt19937_64& rng,
                                                   std::size_t count,
                                                   std::size_t dim) {
  std::vector<std::vector<double>> c(count);
  for (auto& v : c) {
    v = gaussian(rng, dim);
    normalise(v);
  }
  for (int step = 0; step < 3000; ++step) {
    auto next = c;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        if (i == j) continue;
        const double g = std::pow(dot(c[i], c[j]), 3);
        for (std::size_t k = 0; k < dim; ++k) next[i][k] -= 0.5 * g * c[j][k];
      }
      normalise(next[i]);
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

std::vector<std::string> vocabulary(const CorpusSpec& spec,
                                    const Ontology& ontology) {
  std::vector<std::string> out;
  for (const Words& cluster : word_clusters(spec, ontology)) {
    out.insert(out.end(), cluster.begin(), cluster.end());
  }
  return out;
}

EmbeddingTable build_embeddings(const CorpusSpec& spec,
                                const Ontology& ontology) {
  spec.validate();
  constexpr double kWithin = 0.85;
  constexpr double kAcross = 0.3;
  const auto clusters = word_clusters(spec, ontology);
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  const auto centres = spread_directions(rng, clusters.size(), spec.embed_dim);

  struct Placed {
    std::size_t cluster;
    std::vector<double> v;
  };
  std::vector<Placed> placed;
  EmbeddingTable table(spec.embed_dim);
  std::set<std::string> used;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto& word : clusters[c]) {
      if (!used.insert(word).second) {
        throw std::invalid_argument("word '" + word +
                                    "' belongs to two clusters");
      }
      bool ok = false;
      std::vector<double> v;
      // Shrink the off-centre component until the word fits.
      for (int attempt = 0; attempt < 4000 && !ok; ++attempt) {
        const double spread = 0.3 * (1.0 - attempt / 4000.0);
        auto u = gaussian(rng, spec.embed_dim);
        const double along = dot(u, centres[c]);
        for (std::size_t k = 0; k < u.size(); ++k) u[k] -= along * centres[c][k];
        normalise(u);
        v = centres[c];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += spread * u[k];
        normalise(v);
        ok = std::all_of(placed.begin(), placed.end(), [&](const Placed& p) {
          const double cos = dot(p.v, v);
          return p.cluster == c ? cos >= kWithin : cos <= kAcross;
        });
      }
      if (!ok) {
        throw std::runtime_error("cannot place embedding for '" + word +
                                 "'; try a larger embed_dim");
      }
      placed.push_back({c, v});
      table.set(word, v);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Masking

Corpus withhold_slot(Corpus corpus, const Ontology& ontology,
                     std::string_view slot_name) {
  const auto slots = ontology.slots_named(slot_name);
  if (slots.empty()) {
    throw std::invalid_argument("ontology has no slot named '" +
                                std::string(slot_name) + "'");
  }
  for (std::size_t i : slots) corpus.masked.insert(ontology.slot(i).key());
  return corpus;
}

Corpora withhold_slot(Corpora corpora, const Ontology& ontology,
                      std::string_view slot_name) {
  corpora.train = withhold_slot(std::move(corpora.train), ontology, slot_name);
  return corpora;
}

std::size_t masked_label_count(const Corpus& corpus) {
  std::size_t n = 0;
  for (const auto& d : corpus.dialogs) {
    for (const auto& t : d.turns) {
      for (const auto& key : corpus.masked) {
        if (t.labels.contains(key)) ++n;
      }
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// I/O

CorpusError::CorpusError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::string dialog_to_json(const Dialog& dialog) {
  nlohmann::ordered_json doc;
  doc["id"] = dialog.id;
  doc["turns"] = nlohmann::ordered_json::array();
  for (const Turn& t : dialog.turns) {
    nlohmann::ordered_json turn;
    turn["user"] = t.user;
    turn["system"] = t.system;
    auto& labels = turn["labels"];
    labels = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.labels) {
      labels[key] = value ? nlohmann::ordered_json(*value)
                          : nlohmann::ordered_json(nullptr);
    }
    doc["turns"].push_back(std::move(turn));
  }
  return doc.dump();
}

Dialog dialog_from_json(std::string_view line) {
  const auto doc = nlohmann::json::parse(line);
  Dialog dialog;
  dialog.id = doc.at("id").get<std::string>();
  for (const auto& t : doc.at("turns")) {
    Turn turn;
    turn.user = t.at("user").get<Words>();
    turn.system = t.at("system").get<Words>();
    for (const auto& [key, value] : t.at("labels").items()) {
      if (value.is_null()) {
        turn.labels[key] = std::nullopt;
      } else {
        turn.labels[key] = value.get<std::string>();
      }
    }
    dialog.turns.push_back(std::move(turn));
  }
  return dialog;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const Dialog& d : corpus.dialogs) out << dialog_to_json(d) << '\n';
}

Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      corpus.dialogs.push_back(dialog_from_json(line));
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(line_no, std::string("malformed dialog record: ") +
                                     e.what());
    }
    if (!ids.insert(corpus.dialogs.back().id).second) {
      throw CorpusError(line_no,
                        "duplicate dialog id " + corpus.dialogs.back().id);
    }
  }
  return corpus;
}

void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus " + path);
  write_corpus(out, corpus);
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus " + path);
  return read_corpus(in);
}

void save_corpora(const std::string& dir, const Corpora& corpora) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  save_corpus((root / "train.jsonl").string(), corpora.train);
  save_corpus((root / "dev.jsonl").string(), corpora.dev);
  save_corpus((root / "test.jsonl").string(), corpora.test);
}

Corpora load_corpora(const std::string& dir) {
  const std::filesystem::path root(dir);
  Corpora out;
  out.train = load_corpus((root / "train.jsonl").string());
  out.dev = load_corpus((root / "dev.jsonl").string());
  out.test = load_corpus((root / "test.jsonl").string());
  return out;
}

void check_labels(const Corpus& corpus, const Ontology& ontology) {
  for (const Dialog& d : corpus.dialogs) {
    for (const Turn& t : d.turns) {
      for (const auto& [key, value] : t.labels) {
        const auto slot = ontology.find_slot(key);
        if (!slot) {
          throw std::invalid_argument("dialog " + d.id + ": unknown slot " + key);
        }
        if (value && !ontology.find_state(key + "-" + *value)) {
          throw std::invalid_argument("dialog " + d.id + ": unknown value " +
                                      key + "=" + *value);
        }
      }
    }
  }
}

}  // namespace rulenet
