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

#include <cmath>
#include <random>

#include "doctest.h"
#include "dsl_fixtures.h"
#include "rulenet/data.h"
#include "rulenet/ruledsl.h"

using namespace rulenet;
using namespace rulenet::dsl;

namespace {

const std::string kRulesPath = std::string(RULENET_SOURCE_DIR) + "/rules/pricerange.rules";

std::vector<TokenKind> kinds(std::string_view src) {
  std::vector<TokenKind> out;
  for (const auto& t : tokenize(src)) out.push_back(t.kind);
  return out;
}

Formula atom(const std::string& p) {
  return Formula::atom(p, {Argument{Argument::Kind::kIdent, "x", 0.0, {}}});
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// Plain-double In over a list of word vectors.
double in_by_hand(const std::vector<std::vector<double>>& words,
                  const std::vector<double>& concept_vector, double t = 0.7,
                  double k = 20.0) {
  double best = -2.0;
  for (const auto& w : words) best = std::max(best, cosine(w, concept_vector));
  return sigmoid(k * (best - t));
}

}  // namespace

TEST_CASE("tokenize examples") {
  using T = TokenKind;
  CHECK(kinds("A AND B") == std::vector<T>{T::kIdent, T::kAnd, T::kIdent, T::kEnd});
  CHECK(kinds("# comment\nRULE r:") ==
        std::vector<T>{T::kRule, T::kIdent, T::kColon, T::kEnd});
  const auto toks = tokenize("In(UTTERANCE, \"expensive\", 0.7)");
  CHECK(kinds("In(UTTERANCE, \"expensive\", 0.7)") ==
        std::vector<T>{T::kIdent, T::kLParen, T::kIdent, T::kComma, T::kString,
                       T::kComma, T::kNumber, T::kRParen, T::kEnd});
  CHECK(toks[0].text == "In");
  CHECK(toks[2].text == "UTTERANCE");
  CHECK(toks[4].text == "expensive");
  CHECK(toks[6].number == 0.7);
  CHECK(toks[4].where.line == 1);
  CHECK(toks[4].where.column == 15);
}

TEST_CASE("keywords are case-insensitive, identifiers are not") {
  using T = TokenKind;
  CHECK(kinds("rule Not and Or frozen ->") ==
        std::vector<T>{T::kRule, T::kNot, T::kAnd, T::kOr, T::kFrozen, T::kArrow,
                       T::kEnd});
  CHECK(tokenize("Hotel")[0].text == "Hotel");
  CHECK(parse_formula("a(X) and b(x)") ==
        parse_formula("a(X) AND b(x)"));
  CHECK_FALSE(parse_formula("a(X)") == parse_formula("a(x)"));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_formula("A(x) AND B(x) -> C(x)") ==
        Formula::implication(Formula::conjunction(atom("A"), atom("B")), atom("C")));
  CHECK(parse_formula("NOT A(x) AND B(x)") ==
        Formula::conjunction(Formula::negation(atom("A")), atom("B")));
  CHECK(parse_formula("A(x) -> B(x) -> C(x)") ==
        Formula::implication(atom("A"), Formula::implication(atom("B"), atom("C"))));
  CHECK(parse_formula("A(x) OR B(x) AND C(x)") ==
        Formula::disjunction(atom("A"), Formula::conjunction(atom("B"), atom("C"))));
  CHECK(parse_formula("(A(x) OR B(x)) AND C(x)") ==
        Formula::conjunction(Formula::disjunction(atom("A"), atom("B")), atom("C")));
  CHECK(parse_formula("A(x) AND B(x) AND C(x)") ==
        Formula::conjunction(Formula::conjunction(atom("A"), atom("B")), atom("C")));
  CHECK(parse_formula("FROZEN(A(x) AND B(x)) -> C(x)") ==
        Formula::implication(
            Formula::frozen(Formula::conjunction(atom("A"), atom("B"))), atom("C")));
}

TEST_CASE("fuzzed formulas round-trip through both printers") {
  testing::FormulaFuzzer fuzz(99);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = fuzz.formula(1 + i % 5);
    const std::string text = fuzz.render(f);
    CAPTURE(text);
    const Formula parsed = parse_formula(text);
    CHECK(parsed == f);
    CHECK(parse_formula(to_string(parsed)) == f);
  }
}

TEST_CASE("malformed inputs give located diagnostics") {
  const Ontology ontology = default_ontology();
  const SymbolTable symbols =
      default_symbols(ontology, EmbeddingTable(4), PredicateConfig{});
  for (const auto& fx : testing::malformed_fixtures()) {
    const auto [text, at] = testing::unmark(fx.source);
    CAPTURE(fx.source);
    bool thrown = false;
    try {
      const auto decls = parse_rules(text);
      if (fx.needs_symbols) resolve_all(decls, symbols);
    } catch (const DslError& e) {
      thrown = true;
      CHECK(e.code() == fx.code);
      CHECK(e.where().line == at.line);
      CHECK(e.where().column == at.column);
      CHECK(std::string(e.what()).starts_with(std::to_string(at.line) + ":" +
                                              std::to_string(at.column) + ":"));
    }
    CHECK(thrown);
  }
}

TEST_CASE("shipped rule file: twelve rules of the two template shapes") {
  const Ontology ontology = default_ontology();
  const auto rules = load_rules(
      kRulesPath, default_symbols(ontology, EmbeddingTable(4), PredicateConfig{}));
  REQUIRE(rules.size() == 12);
  using K = Formula::Kind;
  int r1 = 0, r2 = 0;
  for (const auto& r : rules) {
    REQUIRE(r.formula.kind == K::kImplies);
    const Formula& lhs = r.formula.children[0];
    const Formula& rhs = r.formula.children[1];
    CHECK(rhs.kind == K::kAtom);
    CHECK(rhs.predicate == "Assert");
    if (r.name.starts_with("r1_")) {
      ++r1;
      CHECK(lhs.kind == K::kAnd);
      CHECK(lhs.children[0].predicate == "In");
      CHECK(lhs.children[1].predicate == "In");
    } else {
      ++r2;
      CHECK(lhs.kind == K::kFrozen);
    }
  }
  CHECK(r1 == 6);
  CHECK(r2 == 6);

  const auto r2_hotel = std::find_if(rules.begin(), rules.end(), [](const auto& r) {
    return r.name == "r2_hotel_expensive";
  });
  REQUIRE(r2_hotel != rules.end());
  CHECK(r2_hotel->formula ==
        parse_formula("FROZEN(Assert(PREV_BELIEF, \"hotel-pricerange-expensive\") "
                      "AND NOT In(UTTERANCE, \"moderate\", 0.7) AND NOT "
                      "In(UTTERANCE, \"cheap\", 0.7)) -> Assert(BELIEF, "
                      "\"hotel-pricerange-expensive\")"));
}

TEST_CASE("resolve diagnostics") {
  const SymbolTable symbols =
      default_symbols(default_ontology(), EmbeddingTable(4), PredicateConfig{});
  auto code_of = [&](const std::string& src) {
    try {
      resolve(parse_formula(src), symbols);
    } catch (const DslError& e) {
      return e.code();
    }
    FAIL("no error for " << src);
    return ErrorCode::kSyntax;
  };
  CHECK(code_of("In(UTTERANCE, \"cheap\")") == ErrorCode::kArity);
  CHECK(code_of("Assert(BELIEF, \"hotel-parking-yes\")") == ErrorCode::kUnknownState);
  CHECK(code_of("Foo(BELIEF)") == ErrorCode::kUnknownPredicate);
  CHECK(code_of("Assert(WHATEVER, \"hotel-pricerange-cheap\")") ==
        ErrorCode::kUnknownBinding);
}

TEST_CASE("a single-atom rule reads the belief probability") {
  const Ontology ontology = default_ontology();
  const SymbolTable symbols = default_symbols(ontology, EmbeddingTable(4), {});
  const auto rule =
      resolve(parse_formula("Assert(BELIEF, \"hotel-pricerange-moderate\")"), symbols);
  const auto ref = *ontology.find_state("hotel-pricerange-moderate");

  ParameterStore p;
  std::vector<NodeId> belief;
  Tape t;
  for (std::size_t s = 0; s < ontology.slot_count(); ++s) {
    const std::size_t w = ontology.slot(s).width();
    std::vector<double> probs(w);
    for (std::size_t i = 0; i < w; ++i) probs[i] = (i + 1.0) / (w * (w + 1) / 2.0);
    p.create("b" + std::to_string(s), {w, 1}, probs);
    belief.push_back(t.parameter(p, "b" + std::to_string(s)));
  }
  const auto truth = compile(rule, t, {{"BELIEF", belief}});
  CHECK(t.scalar(truth.node) == t.value(belief[ref.slot])[ref.value]);
  const auto g = t.backward(truth.node);
  for (std::size_t s = 0; s < belief.size(); ++s) {
    const auto adj = g.adjoint(belief[s]);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      CHECK(adj[i] == (s == ref.slot && i == ref.value ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("missing context binding") {
  const SymbolTable symbols = default_symbols(default_ontology(), EmbeddingTable(4), {});
  const auto rule =
      resolve(parse_formula("Assert(BELIEF, \"hotel-pricerange-cheap\")"), symbols);
  Tape t;
  try {
    compile(rule, t, {});
    FAIL("expected a missing-binding error");
  } catch (const DslError& e) {
    CHECK(e.code() == ErrorCode::kMissingBinding);
  }
}

namespace {

// A three-word geometry with hand-chosen vectors.
struct Toy {
  Ontology ontology = default_ontology();
  EmbeddingTable table{3};
  Toy() {
    table.set("expensive", {1, 0, 0});
    table.set("hotel", {0, 1, 0});
    table.set("moderate", {0, 0, 1});
    table.set("cheap", {0.6, -0.8, 0.0});
  }
};

}  // namespace

TEST_CASE("compiled R1 matches a hand evaluation") {
  Toy toy;
  const auto symbols = default_symbols(toy.ontology, toy.table, {});
  const auto rule = resolve(
      parse_formula("In(UTTERANCE, \"expensive\", 0.7) AND In(UTTERANCE, \"hotel\", "
                    "0.7) -> Assert(BELIEF, \"hotel-pricerange-expensive\")"),
      symbols);
  const std::vector<std::vector<double>> words = {
      {0.95, 0.1, 0.2}, {0.1, 0.9, -0.3}, {0.2, 0.2, 0.9}};
  const auto ref = *toy.ontology.find_state("hotel-pricerange-expensive");

  for (double p_target : {0.0, 0.35}) {
    Tape t;
    std::vector<NodeId> utt;
    for (const auto& w : words) utt.push_back(t.constant(w));
    std::vector<NodeId> belief;
    for (std::size_t s = 0; s < toy.ontology.slot_count(); ++s) {
      std::vector<double> probs(toy.ontology.slot(s).width(), 0.0);
      probs.back() = 1.0;
      if (s == ref.slot) {
        probs[ref.value] = p_target;
        probs.back() = 1.0 - p_target;
      }
      belief.push_back(t.constant(probs));
    }
    const auto truth = compile(rule, t, {{"UTTERANCE", utt}, {"BELIEF", belief}});
    const double s1 = in_by_hand(words, {1, 0, 0});
    const double s2 = in_by_hand(words, {0, 1, 0});
    CHECK(t.scalar(truth.node) ==
          doctest::Approx(1.0 - s1 * s2 * (1.0 - p_target)).epsilon(1e-12));
  }
}

TEST_CASE("compiling the shipped rules registers no parameters") {
  const Ontology ontology = default_ontology();
  const CorpusSpec spec = CorpusSpec::defaults();
  const EmbeddingTable emb = build_embeddings(spec, ontology);
  const auto rules = load_rules(kRulesPath, default_symbols(ontology, emb, {}));

  ParameterStore p;
  p.create("w0", {emb.dim(), 1}, emb.lookup("pricey"));
  p.create("w1", {emb.dim(), 1}, emb.lookup("lodge"));
  Tape t;
  std::vector<NodeId> utt = {t.parameter(p, "w0"), t.parameter(p, "w1")};
  std::vector<NodeId> belief, prev;
  for (const auto& s : ontology.slots()) {
    std::vector<double> u(s.width(), 1.0 / s.width());
    belief.push_back(t.softmax(t.constant(u)));
    prev.push_back(t.constant(u));
  }
  const std::size_t params_before = t.parameters().size();
  const auto store_before = p;
  const logic::EvalContext ctx = {
      {"UTTERANCE", utt}, {"BELIEF", belief}, {"PREV_BELIEF", prev}};
  for (const auto& r : rules) {
    const auto truth = compile(r, t, ctx);
    CHECK(t.scalar(truth.node) >= 0.0);
    CHECK(t.scalar(truth.node) <= 1.0);
  }
  CHECK(t.parameters().size() == params_before);
  CHECK(p == store_before);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.node(NodeId{i}).kind == OpKind::kParameter) CHECK(i < 2);
  }
}

TEST_CASE("no antecedent fires: twelve rules cost almost nothing") {
  const Ontology ontology = default_ontology();
  const CorpusSpec spec = CorpusSpec::defaults();
  const EmbeddingTable emb = build_embeddings(spec, ontology);
  const auto rules = load_rules(kRulesPath, default_symbols(ontology, emb, {}));
  const auto set = make_rule_set(rules, 1.0);

  const std::vector<std::string> words = {"i", "need", "a", "hotel", "in", "the", "north"};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 1.0);

  Tape t;
  std::vector<NodeId> utt;
  std::vector<std::vector<double>> vecs;
  for (const auto& w : words) {
    vecs.push_back(emb.lookup(w));
    utt.push_back(t.constant(vecs.back()));
  }
  std::vector<NodeId> belief, prev;
  std::vector<std::vector<double>> belief_vals;
  for (const auto& s : ontology.slots()) {
    std::vector<double> b(s.width());
    double z = 0;
    for (auto& x : b) z += (x = u(rng));
    for (auto& x : b) x /= z;
    belief_vals.push_back(b);
    belief.push_back(t.constant(b));
    std::vector<double> none(s.width(), 0.0);
    none.back() = 1.0;
    prev.push_back(t.constant(none));
  }
  const NodeId loss = logic::rules_loss(
      t, set, {{"UTTERANCE", utt}, {"BELIEF", belief}, {"PREV_BELIEF", prev}});

  // Brute force: R1 loss is a(price) a(domain) (1 - p); R2 antecedents are
  // zero because the previous belief is all NONE.
  double expected = 0.0;
  for (const auto& domain : {"hotel", "restaurant"}) {
    const auto slot = *ontology.find_slot(std::string(domain) + "-pricerange");
    const auto& values = ontology.slot(slot).values;
    for (std::size_t v = 0; v < values.size(); ++v) {
      const double a = in_by_hand(vecs, emb.lookup(values[v])) *
                       in_by_hand(vecs, emb.lookup(domain));
      expected += a * (1.0 - belief_vals[slot][v]);
    }
  }
  CHECK(t.scalar(loss) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(t.scalar(loss) < 1e-4);
}

TEST_CASE("FROZEN antecedent: no gradient reaches antecedent-only parameters") {
  Toy toy;
  const auto symbols = default_symbols(toy.ontology, toy.table, {});
  const auto rule = resolve(
      parse_formula("FROZEN(Assert(PREV_BELIEF, \"hotel-pricerange-expensive\") AND "
                    "NOT In(UTTERANCE, \"moderate\", 0.7) AND NOT In(UTTERANCE, "
                    "\"cheap\", 0.7)) -> Assert(BELIEF, "
                    "\"hotel-pricerange-expensive\")"),
      symbols);
  const auto ref = *toy.ontology.find_state("hotel-pricerange-expensive");
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    ParameterStore p;
    p.create("u0", {3, 1}, {n(rng), n(rng), n(rng)});
    p.create("u1", {3, 1}, {n(rng), n(rng), n(rng)});
    Tape t;
    std::vector<NodeId> utt = {t.parameter(p, "u0"), t.parameter(p, "u1")};
    std::vector<NodeId> belief, prev;
    for (std::size_t s = 0; s < toy.ontology.slot_count(); ++s) {
      const std::size_t w = toy.ontology.slot(s).width();
      std::vector<double> logits(w), pv(w);
      for (auto& x : logits) x = n(rng);
      for (auto& x : pv) x = n(rng);
      const std::string bn = "logits" + std::to_string(s);
      const std::string pn = "prev" + std::to_string(s);
      p.create(bn, {w, 1}, logits);
      p.create(pn, {w, 1}, pv);
      belief.push_back(t.softmax(t.parameter(p, bn)));
      prev.push_back(t.softmax(t.parameter(p, pn)));
    }
    const auto truth = compile(
        rule, t, {{"UTTERANCE", utt}, {"BELIEF", belief}, {"PREV_BELIEF", prev}});
    const auto grads = t.backward(logic::rule_loss(t, truth)).parameters();
    for (const auto& [name, g] : grads) {
      if (name == "logits" + std::to_string(ref.slot)) continue;
      for (double x : g) CHECK(x == 0.0);
    }
    bool live = false;
    for (double x : grads.at("logits" + std::to_string(ref.slot))) live = live || x != 0.0;
    CHECK(live);
  }
}
