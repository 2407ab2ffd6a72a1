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

#include "rulenet/ruledsl.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace rulenet::dsl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnterminatedString: return "unterminated string";
    case ErrorCode::kIllegalCharacter: return "illegal character";
    case ErrorCode::kSyntax: return "syntax error";
    case ErrorCode::kUnknownPredicate: return "unknown predicate";
    case ErrorCode::kArity: return "arity mismatch";
    case ErrorCode::kArgumentType: return "bad argument";
    case ErrorCode::kUnknownState: return "unknown state";
    case ErrorCode::kUnknownBinding: return "unknown binding";
    case ErrorCode::kDuplicateRule: return "duplicate rule";
    case ErrorCode::kMissingBinding: return "missing binding";
  }
  return "error";
}

namespace {

std::string located(ErrorCode code, Location where, const std::string& msg) {
  return std::to_string(where.line) + ":" + std::to_string(where.column) +
         ": " + std::string(to_string(code)) + ": " + msg;
}

}  // namespace

DslError::DslError(ErrorCode code, Location where, const std::string& message)
    : std::runtime_error(located(code, where, message)),
      code_(code),
      where_(where),
      detail_(message) {}

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kRule: return "RULE";
    case TokenKind::kIdent: return "identifier";
    case TokenKind::kString: return "string";
    case TokenKind::kNumber: return "number";
    case TokenKind::kNot: return "NOT";
    case TokenKind::kAnd: return "AND";
    case TokenKind::kOr: return "OR";
    case TokenKind::kArrow: return "'->'";
    case TokenKind::kLParen: return "'('";
    case TokenKind::kRParen: return "')'";
    case TokenKind::kComma: return "','";
    case TokenKind::kColon: return "':'";
    case TokenKind::kFrozen: return "FROZEN";
    case TokenKind::kSemicolon: return "';'";
    case TokenKind::kEnd: return "end of input";
  }
  return "token";
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      const Location at = here();
      if (pos_ >= src_.size()) {
        out.push_back(Token{TokenKind::kEnd, "", 0.0, at});
        return out;
      }
      const char c = src_[pos_];
      if (ident_start(c)) {
        out.push_back(word(at));
      } else if (digit(c) || (c == '-' && digit(peek(1))) ||
                 (c == '.' && digit(peek(1)))) {
        out.push_back(number(at));
      } else if (c == '"') {
        out.push_back(string(at));
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        out.push_back(Token{TokenKind::kArrow, "->", 0.0, at});
      } else {
        TokenKind kind;
        switch (c) {
          case '(': kind = TokenKind::kLParen; break;
          case ')': kind = TokenKind::kRParen; break;
          case ',': kind = TokenKind::kComma; break;
          case ':': kind = TokenKind::kColon; break;
          case ';': kind = TokenKind::kSemicolon; break;
          default: {
            std::ostringstream msg;
            if (std::isprint(static_cast<unsigned char>(c))) {
              msg << "unexpected '" << c << "'";
            } else {
              msg << "unexpected byte 0x" << std::hex << std::setw(2)
                  << std::setfill('0')
                  << static_cast<int>(static_cast<unsigned char>(c));
            }
            throw DslError(ErrorCode::kIllegalCharacter, at, msg.str());
          }
        }
        advance();
        out.push_back(Token{kind, std::string(1, c), 0.0, at});
      }
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  Location here() const { return Location{line_, col_}; }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Token word(Location at) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    std::string text(src_.substr(start, pos_ - start));
    const std::string key = upper(text);
    static const std::pair<std::string_view, TokenKind> kKeywords[] = {
        {"RULE", TokenKind::kRule}, {"NOT", TokenKind::kNot},
        {"AND", TokenKind::kAnd},   {"OR", TokenKind::kOr},
        {"FROZEN", TokenKind::kFrozen},
    };
    for (const auto& [kw, kind] : kKeywords) {
      if (key == kw) return Token{kind, std::move(text), 0.0, at};
    }
    return Token{TokenKind::kIdent, std::move(text), 0.0, at};
  }

  Token number(Location at) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() && digit(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const char next = peek(1);
      if (digit(next) || ((next == '+' || next == '-') && digit(peek(2)))) {
        advance();
        if (!digit(src_[pos_])) advance();
        while (pos_ < src_.size() && digit(src_[pos_])) advance();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw DslError(ErrorCode::kIllegalCharacter, at,
                     "malformed number '" + text + "'");
    }
    if (pos_ < src_.size() && ident_char(src_[pos_])) {
      throw DslError(ErrorCode::kIllegalCharacter, here(),
                     "unexpected '" + std::string(1, src_[pos_]) +
                         "' after number");
    }
    return Token{TokenKind::kNumber, text, value, at};
  }

  Token string(Location at) {
    advance();  // opening quote
    std::string text;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw DslError(ErrorCode::kUnterminatedString, at,
                       "string is not closed before end of line");
      }
      const char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size() || src_[pos_] == '\n') {
          throw DslError(ErrorCode::kUnterminatedString, at,
                         "string is not closed before end of line");
        }
        const char e = src_[pos_];
        if (e != '"' && e != '\\') {
          throw DslError(ErrorCode::kIllegalCharacter, here(),
                         "unknown escape '\\" + std::string(1, e) + "'");
        }
        text.push_back(e);
        advance();
        continue;
      }
      text.push_back(c);
      advance();
    }
    return Token{TokenKind::kString, std::move(text), 0.0, at};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

// ---------------------------------------------------------------------------
// AST helpers

Formula Formula::atom(std::string predicate, std::vector<Argument> args) {
  Formula f;
  f.kind = Kind::kAtom;
  f.predicate = std::move(predicate);
  f.args = std::move(args);
  return f;
}

namespace {

Formula make(Formula::Kind kind, std::vector<Formula> children) {
  Formula f;
  f.kind = kind;
  f.children = std::move(children);
  return f;
}

}  // namespace

Formula Formula::negation(Formula f) {
  return make(Kind::kNot, {std::move(f)});
}
Formula Formula::conjunction(Formula a, Formula b) {
  return make(Kind::kAnd, {std::move(a), std::move(b)});
}
Formula Formula::disjunction(Formula a, Formula b) {
  return make(Kind::kOr, {std::move(a), std::move(b)});
}
Formula Formula::implication(Formula a, Formula b) {
  return make(Kind::kImplies, {std::move(a), std::move(b)});
}
Formula Formula::frozen(Formula f) {
  return make(Kind::kFrozen, {std::move(f)});
}

namespace {

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  // Keep a marker so the literal never lexes as an identifier fragment.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void print(const Formula& f, std::ostream& out, bool nested) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::kAtom: {
      out << f.predicate << '(';
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out << ", ";
        const Argument& a = f.args[i];
        switch (a.kind) {
          case Argument::Kind::kIdent: out << a.text; break;
          case Argument::Kind::kNumber: out << format_number(a.number); break;
          case Argument::Kind::kString:
            out << '"';
            for (char c : a.text) {
              if (c == '"' || c == '\\') out << '\\';
              out << c;
            }
            out << '"';
            break;
        }
      }
      out << ')';
      return;
    }
    case K::kNot:
      out << "NOT ";
      print(f.children[0], out, true);
      return;
    case K::kFrozen:
      out << "FROZEN(";
      print(f.children[0], out, false);
      out << ')';
      return;
    case K::kAnd:
    case K::kOr:
    case K::kImplies: {
      const char* op = f.kind == K::kAnd ? " AND "
                       : f.kind == K::kOr ? " OR "
                                          : " -> ";
      if (nested) out << '(';
      print(f.children[0], out, true);
      out << op;
      print(f.children[1], out, true);
      if (nested) out << ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream out;
  print(f, out, false);
  return out.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::kEnd) {
      throw std::invalid_argument("token stream must end with an end token");
    }
  }

  std::vector<RuleDecl> rule_file() {
    std::vector<RuleDecl> rules;
    while (peek().kind != TokenKind::kEnd) rules.push_back(rule());
    return rules;
  }

  Formula whole_formula() {
    Formula f = formula();
    expect(TokenKind::kEnd, "after formula");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::kEnd) ++pos_;
    return t;
  }
  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(std::string_view expected, std::string_view context) {
    const Token& t = peek();
    std::string found(to_string(t.kind));
    if (t.kind == TokenKind::kIdent) found += " '" + t.text + "'";
    if (t.kind == TokenKind::kString) found += " \"" + t.text + "\"";
    if (t.kind == TokenKind::kNumber) found += " " + t.text;
    std::string msg = "expected " + std::string(expected);
    if (!context.empty()) msg += " " + std::string(context);
    msg += ", found " + found;
    throw DslError(ErrorCode::kSyntax, t.where, msg);
  }

  const Token& expect(TokenKind kind, std::string_view context) {
    if (peek().kind != kind) fail(to_string(kind), context);
    return take();
  }

  RuleDecl rule() {
    const Token& kw = expect(TokenKind::kRule, "at start of rule");
    RuleDecl decl;
    decl.where = kw.where;
    decl.name = expect(TokenKind::kIdent, "as rule name").text;
    expect(TokenKind::kColon, "after rule name");
    decl.formula = formula();
    expect(TokenKind::kSemicolon, "at end of rule");
    return decl;
  }

  Formula formula() { return implication(); }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == TokenKind::kArrow) {
      const Location at = take().where;
      Formula f = Formula::implication(std::move(lhs), implication());
      f.where = at;
      return f;
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (peek().kind == TokenKind::kOr) {
      const Location at = take().where;
      lhs = Formula::disjunction(std::move(lhs), conjunction());
      lhs.where = at;
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (peek().kind == TokenKind::kAnd) {
      const Location at = take().where;
      lhs = Formula::conjunction(std::move(lhs), unary());
      lhs.where = at;
    }
    return lhs;
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kNot: {
        const Location at = take().where;
        Formula f = Formula::negation(unary());
        f.where = at;
        return f;
      }
      case TokenKind::kFrozen: {
        const Location at = take().where;
        expect(TokenKind::kLParen, "after FROZEN");
        Formula f = Formula::frozen(formula());
        expect(TokenKind::kRParen, "to close FROZEN");
        f.where = at;
        return f;
      }
      case TokenKind::kLParen: {
        take();
        Formula f = formula();
        expect(TokenKind::kRParen, "to close '('");
        return f;
      }
      case TokenKind::kIdent:
        return atom();
      default:
        fail("a formula", "");
    }
  }

  Formula atom() {
    const Token& name = take();
    expect(TokenKind::kLParen, "after predicate name");
    std::vector<Argument> args;
    do {
      args.push_back(argument());
    } while (accept(TokenKind::kComma));
    expect(TokenKind::kRParen, "to close argument list");
    Formula f = Formula::atom(name.text, std::move(args));
    f.where = name.where;
    return f;
  }

  Argument argument() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kIdent:
        take();
        return Argument{Argument::Kind::kIdent, t.text, 0.0, t.where};
      case TokenKind::kString:
        take();
        return Argument{Argument::Kind::kString, t.text, 0.0, t.where};
      case TokenKind::kNumber:
        take();
        return Argument{Argument::Kind::kNumber, "", t.number, t.where};
      default:
        fail("an argument (identifier, string or number)", "");
    }
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::vector<Token>& tokens) {
  return Parser(tokens).whole_formula();
}

Formula parse_formula(std::string_view source) {
  return parse_formula(tokenize(source));
}

std::vector<RuleDecl> parse_rules(const std::vector<Token>& tokens) {
  return Parser(tokens).rule_file();
}

std::vector<RuleDecl> parse_rules(std::string_view source) {
  return parse_rules(tokenize(source));
}

// ---------------------------------------------------------------------------
// Symbols

void SymbolTable::add_predicate(const std::string& name, PredicateEntry entry) {
  predicates_.insert_or_assign(name, std::move(entry));
}

void SymbolTable::add_binding(const std::string& name, BindingKind kind) {
  bindings_.insert_or_assign(name, kind);
}

const PredicateEntry* SymbolTable::predicate(std::string_view name) const {
  auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}

const BindingKind* SymbolTable::binding(std::string_view name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

namespace {

const char* kind_name(Argument::Kind k) {
  switch (k) {
    case Argument::Kind::kIdent: return "identifier";
    case Argument::Kind::kString: return "string";
    case Argument::Kind::kNumber: return "number";
  }
  return "argument";
}

void require_kind(const Formula& atom, std::size_t i, Argument::Kind kind) {
  const Argument& a = atom.args[i];
  if (a.kind != kind) {
    throw DslError(ErrorCode::kArgumentType, a.where,
                   atom.predicate + " argument " + std::to_string(i + 1) +
                       " must be a " + kind_name(kind) + ", got a " +
                       kind_name(a.kind));
  }
}

// Resolves a binding argument and checks it is one of `allowed`.
BindingKind require_binding(const SymbolTable& symbols, const Formula& atom,
                            std::size_t i,
                            std::initializer_list<BindingKind> allowed) {
  require_kind(atom, i, Argument::Kind::kIdent);
  const Argument& a = atom.args[i];
  const BindingKind* kind = symbols.binding(a.text);
  if (!kind) {
    throw DslError(ErrorCode::kUnknownBinding, a.where,
                   "no graph binding named '" + a.text + "'");
  }
  if (std::find(allowed.begin(), allowed.end(), *kind) == allowed.end()) {
    throw DslError(ErrorCode::kArgumentType, a.where,
                   "binding '" + a.text + "' cannot be used as argument " +
                       std::to_string(i + 1) + " of " + atom.predicate);
  }
  return *kind;
}

const std::vector<NodeId>& lookup_binding(const logic::EvalContext& context,
                                          const std::string& name,
                                          Location where) {
  auto it = context.find(name);
  if (it == context.end()) {
    throw DslError(ErrorCode::kMissingBinding, where,
                   "evaluation context does not provide '" + name + "'");
  }
  return it->second;
}

}  // namespace

SymbolTable default_symbols(const Ontology& ontology,
                            const EmbeddingTable& embeddings,
                            const PredicateConfig& config) {
  config.validate();
  SymbolTable table;
  table.add_binding(std::string(kUtterance), BindingKind::kTokens);
  table.add_binding(std::string(kBelief), BindingKind::kBelief);
  table.add_binding(std::string(kPrevBelief), BindingKind::kPrevBelief);
  // Resolvers check bindings against their own copy of the table.
  const SymbolTable bindings_only = table;
  const double sharpness = config.sharpness;

  // In(tokens, "word", threshold)
  PredicateEntry in;
  in.arity = 3;
  in.resolve = [bindings_only, embeddings,
                sharpness](const Formula& atom) -> AtomFn {
    require_binding(bindings_only, atom, 0, {BindingKind::kTokens});
    require_kind(atom, 1, Argument::Kind::kString);
    require_kind(atom, 2, Argument::Kind::kNumber);
    const double threshold = atom.args[2].number;
    if (!(threshold >= -1.0 && threshold <= 1.0)) {
      throw DslError(ErrorCode::kArgumentType, atom.args[2].where,
                     "similarity threshold must lie in [-1, 1]");
    }
    const std::string binding = atom.args[0].text;
    const std::string word = atom.args[1].text;
    const std::vector<double> concept_vector = embeddings.lookup(word);
    std::ostringstream key;
    key << std::setprecision(std::numeric_limits<double>::max_digits10)
        << "In|" << binding << '|' << word << '|' << threshold;
    const Location where = atom.where;
    return [binding, concept_vector, threshold, sharpness, where,
            memo_key = key.str()](Tape& tape,
                                  const logic::EvalContext& context,
                                  logic::NodeMemo& memo) {
      if (auto it = memo.find(memo_key); it != memo.end()) {
        return logic::truth(tape, it->second);
      }
      const auto& tokens = lookup_binding(context, binding, where);
      const auto value =
          contains_word_like(tape, tokens, concept_vector, threshold, sharpness);
      memo.emplace(memo_key, value.node);
      return value;
    };
  };
  table.add_predicate("In", in);

  // Assert(belief, "domain-slot-value")
  PredicateEntry assert_entry;
  assert_entry.arity = 2;
  assert_entry.resolve = [bindings_only,
                          ontology](const Formula& atom) -> AtomFn {
    const BindingKind kind = require_binding(
        bindings_only, atom, 0, {BindingKind::kBelief, BindingKind::kPrevBelief});
    require_kind(atom, 1, Argument::Kind::kString);
    const auto state = ontology.find_state(atom.args[1].text);
    if (!state) {
      throw DslError(ErrorCode::kUnknownState, atom.args[1].where,
                     "ontology has no state '" + atom.args[1].text + "'");
    }
    const std::string binding = atom.args[0].text;
    const Location where = atom.where;
    const StateRef ref = *state;
    const bool previous = kind == BindingKind::kPrevBelief;
    return [binding, ref, previous, where](Tape& tape,
                                           const logic::EvalContext& context,
                                           logic::NodeMemo&) {
      const auto& slots = lookup_binding(context, binding, where);
      if (ref.slot >= slots.size()) {
        throw DslError(ErrorCode::kMissingBinding, where,
                       "binding '" + binding + "' has no slot " +
                           std::to_string(ref.slot));
      }
      return previous ? prev_assert_state(tape, slots[ref.slot], ref.value)
                      : assert_state(tape, slots[ref.slot], ref.value);
    };
  };
  table.add_predicate("Assert", assert_entry);
  return table;
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

BoundFormula bind(const Formula& f, const SymbolTable& symbols) {
  BoundFormula out;
  out.kind = f.kind;
  if (f.kind == Formula::Kind::kAtom) {
    const PredicateEntry* entry = symbols.predicate(f.predicate);
    if (!entry) {
      throw DslError(ErrorCode::kUnknownPredicate, f.where,
                     "no predicate named '" + f.predicate + "'");
    }
    if (f.args.size() != entry->arity) {
      throw DslError(ErrorCode::kArity, f.where,
                     f.predicate + " expects " + std::to_string(entry->arity) +
                         " arguments, got " + std::to_string(f.args.size()));
    }
    out.atom = entry->resolve(f);
    return out;
  }
  for (const Formula& child : f.children) {
    out.children.push_back(bind(child, symbols));
  }
  return out;
}

logic::TruthValue emit(const BoundFormula& f, Tape& tape,
                       const logic::EvalContext& context,
                       logic::NodeMemo& memo) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::kAtom:
      return f.atom(tape, context, memo);
    case K::kNot:
      return logic::negate(tape, emit(f.children[0], tape, context, memo));
    case K::kFrozen: {
      const auto inner = emit(f.children[0], tape, context, memo);
      return logic::truth(tape, tape.stop_gradient(inner.node));
    }
    case K::kAnd:
    case K::kOr:
    case K::kImplies: {
      const auto a = emit(f.children[0], tape, context, memo);
      const auto b = emit(f.children[1], tape, context, memo);
      if (f.kind == K::kAnd) return logic::conjoin(tape, a, b);
      if (f.kind == K::kOr) return logic::disjoin(tape, a, b);
      return logic::implies(tape, a, b);
    }
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

CompiledRule resolve(const RuleDecl& rule, const SymbolTable& symbols) {
  return CompiledRule{rule.name, rule.formula, bind(rule.formula, symbols),
                      rule.where};
}

CompiledRule resolve(const Formula& formula, const SymbolTable& symbols,
                     std::string name) {
  return CompiledRule{std::move(name), formula, bind(formula, symbols),
                      formula.where};
}

std::vector<CompiledRule> resolve_all(const std::vector<RuleDecl>& rules,
                                      const SymbolTable& symbols) {
  std::vector<CompiledRule> out;
  std::set<std::string> names;
  for (const RuleDecl& r : rules) {
    if (!names.insert(r.name).second) {
      throw DslError(ErrorCode::kDuplicateRule, r.where,
                     "rule '" + r.name + "' is defined twice");
    }
    out.push_back(resolve(r, symbols));
  }
  return out;
}

logic::TruthValue compile(const CompiledRule& rule, Tape& tape,
                          const logic::EvalContext& context) {
  logic::NodeMemo memo;
  return compile(rule, tape, context, memo);
}

logic::TruthValue compile(const CompiledRule& rule, Tape& tape,
                          const logic::EvalContext& context,
                          logic::NodeMemo& memo) {
  return emit(rule.bound, tape, context, memo);
}

logic::RuleSet make_rule_set(const std::vector<CompiledRule>& rules,
                             double weight) {
  logic::RuleSet set(weight);
  for (const CompiledRule& r : rules) {
    set.add(logic::Rule{r.name, [r](Tape& tape,
                                    const logic::EvalContext& context,
                                    logic::NodeMemo& memo) {
                          return compile(r, tape, context, memo);
                        }});
  }
  return set;
}

std::vector<CompiledRule> load_rules(const std::string& path,
                                     const SymbolTable& symbols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return resolve_all(parse_rules(buffer.str()), symbols);
}

}  // namespace rulenet::dsl
