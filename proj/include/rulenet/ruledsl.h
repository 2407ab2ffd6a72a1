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

// Text rules -> Formula ASTs -> truthiness nodes on a tape.
//
// Grammar (keywords are case-insensitive):
//
//   rulefile := rule*
//   rule     := "RULE" IDENT ":" formula ";"
//   formula  := imp
//   imp      := or ("->" imp)?
//   or       := and ("OR" and)*
//   and      := unary ("AND" unary)*
//   unary    := "NOT" unary | "FROZEN" "(" formula ")" | atom | "(" formula ")"
//   atom     := IDENT "(" arg ("," arg)* ")"
//   arg      := IDENT | STRING | NUMBER
//
// '#' starts a comment that runs to the end of the line.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rulenet/autodiff.h"
#include "rulenet/logic.h"
#include "rulenet/ontology.h"
#include "rulenet/predicates.h"

namespace rulenet::dsl {

enum class ErrorCode {
  kUnterminatedString,
  kIllegalCharacter,
  kSyntax,
  kUnknownPredicate,
  kArity,
  kArgumentType,
  kUnknownState,
  kUnknownBinding,
  kDuplicateRule,
  kMissingBinding,
};

std::string_view to_string(ErrorCode code);

struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
};

class DslError : public std::runtime_error {
 public:
  DslError(ErrorCode code, Location where, const std::string& message);

  ErrorCode code() const { return code_; }
  Location where() const { return where_; }
  // Message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  Location where_;
  std::string detail_;
};

// ---------------------------------------------------------------------------
// Lexing

enum class TokenKind {
  kRule,
  kIdent,
  kString,
  kNumber,
  kNot,
  kAnd,
  kOr,
  kArrow,
  kLParen,
  kRParen,
  kComma,
  kColon,
  kFrozen,
  kSemicolon,
  kEnd,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;  // identifier name or unescaped string contents
  double number = 0.0;
  Location where;
};

// The returned sequence always ends with a kEnd token.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// AST

struct Argument {
  enum class Kind { kIdent, kString, kNumber };
  Kind kind;
  std::string text;
  double number = 0.0;
  Location where;

  friend bool operator==(const Argument& a, const Argument& b) {
    return a.kind == b.kind && a.text == b.text && a.number == b.number;
  }
};

struct Formula {
  enum class Kind { kAtom, kNot, kAnd, kOr, kImplies, kFrozen };
  Kind kind = Kind::kAtom;
  std::string predicate;        // atoms only
  std::vector<Argument> args;   // atoms only
  std::vector<Formula> children;
  Location where;

  static Formula atom(std::string predicate, std::vector<Argument> args);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula frozen(Formula f);

  // Structural equality; locations are ignored.
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.kind == b.kind && a.predicate == b.predicate && a.args == b.args &&
           a.children == b.children;
  }
};

// Canonical text. Binary subformulas are parenthesised so the output
// reparses to the same tree.
std::string to_string(const Formula& f);

struct RuleDecl {
  std::string name;
  Formula formula;
  Location where;
};

// Parses a single formula (the whole token stream must be consumed).
Formula parse_formula(const std::vector<Token>& tokens);
Formula parse_formula(std::string_view source);
std::vector<RuleDecl> parse_rules(const std::vector<Token>& tokens);
std::vector<RuleDecl> parse_rules(std::string_view source);

// ---------------------------------------------------------------------------
// Resolution and compilation

// Binding names a rule can refer to as identifier arguments.
inline constexpr std::string_view kUtterance = "UTTERANCE";
inline constexpr std::string_view kBelief = "BELIEF";
inline constexpr std::string_view kPrevBelief = "PREV_BELIEF";

using AtomFn = std::function<logic::TruthValue(
    Tape&, const logic::EvalContext&, logic::NodeMemo&)>;

// Checks argument count and kinds, and binds constants. Throws DslError.
using AtomResolver = std::function<AtomFn(const Formula& atom)>;

struct PredicateEntry {
  std::size_t arity = 0;
  AtomResolver resolve;
};

enum class BindingKind { kTokens, kBelief, kPrevBelief };

class SymbolTable {
 public:
  void add_predicate(const std::string& name, PredicateEntry entry);
  void add_binding(const std::string& name, BindingKind kind);

  const PredicateEntry* predicate(std::string_view name) const;
  const BindingKind* binding(std::string_view name) const;

 private:
  std::map<std::string, PredicateEntry, std::less<>> predicates_;
  std::map<std::string, BindingKind, std::less<>> bindings_;
};

// Registers In(tokens, "word", threshold) and Assert(belief, "d-s-v") over
// the given ontology and embeddings, and the three standard bindings.
SymbolTable default_symbols(const Ontology& ontology,
                            const EmbeddingTable& embeddings,
                            const PredicateConfig& config);

struct BoundFormula {
  Formula::Kind kind = Formula::Kind::kAtom;
  AtomFn atom;
  std::vector<BoundFormula> children;
};

struct CompiledRule {
  std::string name;
  Formula formula;
  BoundFormula bound;
  Location where;
};

CompiledRule resolve(const RuleDecl& rule, const SymbolTable& symbols);
CompiledRule resolve(const Formula& formula, const SymbolTable& symbols,
                     std::string name = "anonymous");
// Resolves every rule and rejects duplicate names.
std::vector<CompiledRule> resolve_all(const std::vector<RuleDecl>& rules,
                                      const SymbolTable& symbols);

// Emits the rule onto `tape` against `context`. FROZEN subformulas are
// wrapped in a gradient stop. Only non-parameter nodes are emitted.
logic::TruthValue compile(const CompiledRule& rule, Tape& tape,
                          const logic::EvalContext& context);
logic::TruthValue compile(const CompiledRule& rule, Tape& tape,
                          const logic::EvalContext& context,
                          logic::NodeMemo& memo);

// Wraps compiled rules into a rule set.
logic::RuleSet make_rule_set(const std::vector<CompiledRule>& rules,
                             double weight);

// Reads and resolves a .rules file.
std::vector<CompiledRule> load_rules(const std::string& path,
                                     const SymbolTable& symbols);

}  // namespace rulenet::dsl
