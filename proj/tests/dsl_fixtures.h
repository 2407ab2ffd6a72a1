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

// Rule-language fixtures: a random well-formed formula generator with its
// own printer, and malformed rule files whose error position is marked.

#pragma once

#include <charconv>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rulenet/ruledsl.h"

namespace rulenet::testing {

using dsl::Argument;
using dsl::ErrorCode;
using dsl::Formula;

class FormulaFuzzer {
 public:
  explicit FormulaFuzzer(std::uint64_t seed) : rng_(seed) {}

  Formula formula(int depth) {
    const int choice = depth <= 0 ? 0 : pick(7);
    switch (choice) {
      case 0:
      case 1: return atom();
      case 2: return Formula::negation(formula(depth - 1));
      case 3: return Formula::conjunction(formula(depth - 1), formula(depth - 1));
      case 4: return Formula::disjunction(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::implication(formula(depth - 1), formula(depth - 1));
      default: return Formula::frozen(formula(depth - 1));
    }
  }

  // Fully parenthesised text with random keyword case, spacing, comments
  // and redundant parentheses.
  std::string render(const Formula& f) {
    using K = Formula::Kind;
    std::string out;
    const bool extra = pick(4) == 0;
    if (extra) out += "(" + space();
    switch (f.kind) {
      case K::kAtom: {
        out += f.predicate + space() + "(" + space();
        for (std::size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += space() + "," + space();
          out += arg(f.args[i]);
        }
        out += space() + ")";
        break;
      }
      case K::kNot:
        out += keyword("not") + " " + space() + "(" + render(f.children[0]) + ")";
        break;
      case K::kFrozen:
        out += keyword("frozen") + space() + "(" + space() +
               render(f.children[0]) + space() + ")";
        break;
      default: {
        const std::string op = f.kind == K::kAnd  ? " " + keyword("and") + " "
                               : f.kind == K::kOr ? " " + keyword("or") + " "
                                                  : "->";
        out += "(" + render(f.children[0]) + ")" + space() + op + space() + "(" +
               render(f.children[1]) + ")";
        break;
      }
    }
    if (extra) out += space() + ")";
    return out;
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  std::string identifier() {
    static const char kHead[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    static const char kTail[] = "abcdefghijklmnopqrstuvwxyz0123456789_";
    static const std::vector<std::string> kReserved = {"RULE", "NOT", "AND", "OR",
                                                       "FROZEN"};
    while (true) {
      std::string s(1, kHead[pick(sizeof kHead - 1)]);
      const std::size_t n = pick(8);
      for (std::size_t i = 0; i < n; ++i) s += kTail[pick(sizeof kTail - 1)];
      std::string up = s;
      for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      bool reserved = false;
      for (const auto& r : kReserved) reserved = reserved || up == r;
      if (!reserved) return s;
    }
  }

  Formula atom() {
    std::vector<Argument> args(1 + pick(3));
    for (auto& a : args) {
      switch (pick(3)) {
        case 0:
          a = Argument{Argument::Kind::kIdent, identifier(), 0.0, {}};
          break;
        case 1: {
          static const char kChars[] = "abc XYZ-_.\"\\019";
          std::string s;
          const std::size_t n = pick(10);
          for (std::size_t i = 0; i < n; ++i) s += kChars[pick(sizeof kChars - 1)];
          a = Argument{Argument::Kind::kString, s, 0.0, {}};
          break;
        }
        default: {
          std::normal_distribution<double> normal(0.0, 1.0);
          double v = normal(rng_);
          if (pick(3) == 0) v *= 1e6;
          if (pick(5) == 0) v = static_cast<double>(static_cast<int>(v * 10));
          a = Argument{Argument::Kind::kNumber, "", v, {}};
          break;
        }
      }
    }
    return Formula::atom(identifier(), std::move(args));
  }

  std::string arg(const Argument& a) {
    switch (a.kind) {
      case Argument::Kind::kIdent: return a.text;
      case Argument::Kind::kString: {
        std::string s = "\"";
        for (char c : a.text) {
          if (c == '"' || c == '\\') s += '\\';
          s += c;
        }
        return s + "\"";
      }
      case Argument::Kind::kNumber: {
        char buf[40];
        const auto r = std::to_chars(buf, buf + sizeof buf, a.number);
        return std::string(buf, r.ptr);
      }
    }
    return "";
  }

  std::string keyword(const std::string& lower) {
    std::string s = lower;
    for (char& c : s) {
      if (pick(2)) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
  }

  std::string space() {
    switch (pick(6)) {
      case 0: return " ";
      case 1: return "\n  ";
      case 2: return " # note\n";
      case 3: return "\t";
      default: return "";
    }
  }

  std::mt19937_64 rng_;
};

struct MalformedFixture {
  // '@' marks where the diagnostic must point; it is removed before parsing.
  std::string source;
  ErrorCode code;
  bool needs_symbols = false;
};

inline std::vector<MalformedFixture> malformed_fixtures() {
  using E = ErrorCode;
  return {
      {"RULE r: A(x) -> @;", E::kSyntax},
      {"RULE r: A(x)@", E::kSyntax},
      {"RULE r @A(x);", E::kSyntax},
      {"RULE @: A(x);", E::kSyntax},
      {"@rule_x: A(x);", E::kSyntax},
      {"RULE r: A(x, @\"abc);", E::kUnterminatedString},
      {"RULE r: A(x) @$ B(y);", E::kIllegalCharacter},
      {"RULE r: A(x) AND @;", E::kSyntax},
      {"RULE r: (A(x) AND B(y)@;", E::kSyntax},
      {"RULE r: A(@);", E::kSyntax},
      {"RULE r: A(x,@);", E::kSyntax},
      {"RULE r: FROZEN @A(x);", E::kSyntax},
      {"RULE r: NOT @-> A(x);", E::kSyntax},
      {"RULE r: A(x) @B(y);", E::kSyntax},
      {"RULE a: A(x);\nRULE b: A(x) OR\n  @;", E::kSyntax},
      {"RULE r: A @x);", E::kSyntax},
      {"RULE r: A(x) -> B(y) -> @;", E::kSyntax},
      {"RULE r: A(x) @) ;", E::kSyntax},
      {"RULE r: A(x);\n\n  RULE s: @&& B(y);", E::kIllegalCharacter},
      {"RULE r: A(\"ok\", @\"line\nbreak\");", E::kUnterminatedString},
      {"RULE r: A(12@abc);", E::kIllegalCharacter},
      {"RULE r: A(\"a\\@q\");", E::kIllegalCharacter},
      // Resolution against the standard symbols.
      {"RULE r: @Inn(UTTERANCE, \"cheap\", 0.7);", E::kUnknownPredicate, true},
      {"RULE r: @In(UTTERANCE, \"cheap\");", E::kArity, true},
      {"RULE r: Assert(BELIEF, @\"hotel-parking-yes\");", E::kUnknownState, true},
      {"RULE r: Assert(@BELIEFS, \"hotel-pricerange-cheap\");", E::kUnknownBinding,
       true},
      {"RULE r: In(@BELIEF, \"cheap\", 0.7);", E::kArgumentType, true},
      {"RULE r: In(UTTERANCE, \"cheap\", @2.5);", E::kArgumentType, true},
      {"RULE r: Assert(BELIEF, @7);", E::kArgumentType, true},
      {"RULE r: Assert(BELIEF, \"hotel-pricerange-cheap\");\n"
       "@RULE r: Assert(BELIEF, \"hotel-pricerange-cheap\");",
       E::kDuplicateRule, true},
  };
}

// Splits a fixture into the text to parse and the marked location.
inline std::pair<std::string, dsl::Location> unmark(const std::string& marked) {
  dsl::Location at;
  std::string text;
  for (char c : marked) {
    if (c == '@') continue;
    if (marked.find('@') > text.size()) {
      if (c == '\n') {
        ++at.line;
        at.column = 1;
      } else {
        ++at.column;
      }
    }
    text += c;
  }
  return {text, at};
}

}  // namespace rulenet::testing
