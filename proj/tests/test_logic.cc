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
#include "rulenet/logic.h"

using namespace rulenet;
using namespace rulenet::logic;

namespace {

struct Pair {
  Tape tape;
  ParameterStore params;
  TruthValue x;
  TruthValue y;

  Pair(double xv, double yv) {
    params.create("x", {1, 1}, {xv});
    params.create("y", {1, 1}, {yv});
    x = TruthValue{tape.parameter(params, "x")};
    y = TruthValue{tape.parameter(params, "y")};
  }
  double operator()(TruthValue t) const { return tape.scalar(t.node); }
};

double val(Tape& t, TruthValue v) { return t.scalar(v.node); }

TruthValue c(Tape& t, double v) { return truth(t, t.constant(v)); }

}  // namespace

TEST_CASE("connective examples") {
  Tape t;
  CHECK(val(t, negate(t, c(t, 1.0))) == 0.0);
  CHECK(val(t, negate(t, c(t, 0.3))) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(val(t, conjoin(t, c(t, 0.5), c(t, 0.4))) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(val(t, disjoin(t, c(t, 0.5), c(t, 0.5))) == 0.75);
  CHECK(val(t, implies(t, c(t, 1.0), c(t, 0.0))) == 0.0);
  for (double y : {0.0, 0.2, 0.9, 1.0}) {
    CHECK(val(t, implies(t, c(t, 0.0), c(t, y))) == 1.0);
  }
}

TEST_CASE("identity and annihilator elements") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Tape t;
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const TruthValue tx = c(t, x);
    CHECK(val(t, negate(t, negate(t, tx))) == doctest::Approx(x).epsilon(1e-15));
    CHECK(val(t, conjoin(t, tx, c(t, 1.0))) == x);
    CHECK(val(t, conjoin(t, tx, c(t, 0.0))) == 0.0);
    CHECK(val(t, disjoin(t, tx, c(t, 0.0))) == x);
    // x + 1 - x rounds
    CHECK(std::abs(val(t, disjoin(t, tx, c(t, 1.0))) - 1.0) <= 1e-15);
  }
}

TEST_CASE("range, De Morgan and implication identities on 10^4 pairs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    Tape t;
    const TruthValue tx = c(t, x);
    const TruthValue ty = c(t, y);
    const double n = val(t, negate(t, tx));
    const double a = val(t, conjoin(t, tx, ty));
    const double o = val(t, disjoin(t, tx, ty));
    const double m = val(t, implies(t, tx, ty));
    for (double v : {n, a, o, m}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // Plain-double evaluation of the definitions.
    CHECK(std::abs(a - x * y) <= 1e-12);
    CHECK(std::abs(o - (x + y - x * y)) <= 1e-12);
    CHECK(std::abs(m - (1 - x * (1 - y))) <= 1e-12);
    const double de_morgan =
        val(t, negate(t, conjoin(t, negate(t, tx), negate(t, ty))));
    CHECK(std::abs(o - de_morgan) <= 1e-12);
    const double via_and = val(t, negate(t, conjoin(t, tx, negate(t, ty))));
    CHECK(std::abs(m - via_and) <= 1e-12);
  }
}

TEST_CASE("implication loss partials are (1 - y, -x)") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    Pair p(x, y);
    const NodeId loss = rule_loss(p.tape, implies(p.tape, p.x, p.y));
    CHECK(p.tape.scalar(loss) == doctest::Approx(x * (1 - y)).epsilon(1e-15));
    const auto g = p.tape.backward(loss);
    CHECK(g.scalar(p.x.node) == 1.0 - y);
    CHECK(g.scalar(p.y.node) == -x);
  }
}

TEST_CASE("monotonicity probes") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  const double h = 1e-6;
  auto eval = [](int op, double x, double y) {
    Tape t;
    const TruthValue tx = c(t, x);
    const TruthValue ty = c(t, y);
    switch (op) {
      case 0: return val(t, conjoin(t, tx, ty));
      case 1: return val(t, disjoin(t, tx, ty));
      default: return val(t, implies(t, tx, ty));
    }
  };
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    for (int op = 0; op < 3; ++op) {
      const double dx = eval(op, x + h, y) - eval(op, x - h, y);
      const double dy = eval(op, x, y + h) - eval(op, x, y - h);
      if (op == 2) {
        CHECK(dx <= 0.0);
      } else {
        CHECK(dx >= 0.0);
      }
      CHECK(dy >= 0.0);
    }
  }
}

TEST_CASE("rule loss") {
  Tape t;
  CHECK(t.scalar(rule_loss(t, c(t, 1.0))) == 0.0);
  CHECK(t.scalar(rule_loss(t, implies(t, c(t, 1.0), c(t, 0.0)))) == 1.0);
  CHECK(t.scalar(rule_loss(t, c(t, 0.7))) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("rules loss sums complements") {
  Tape t;
  CHECK(t.scalar(rules_loss(t, RuleSet{}, {})) == 0.0);

  RuleSet rs(1.0);
  rs.add({"a", [](Tape& tp, const EvalContext&, NodeMemo&) { return c(tp, 1.0); }});
  rs.add({"b", [](Tape& tp, const EvalContext&, NodeMemo&) { return c(tp, 0.25); }});
  CHECK(t.scalar(rules_loss(t, rs, {})) == 0.75);
}

TEST_CASE("rule set contracts") {
  RuleSet rs;
  rs.add({"a", {}});
  CHECK_THROWS_AS(rs.add({"a", {}}), std::invalid_argument);
  CHECK_THROWS_AS(rs.set_weight(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(rs.set_weight(NAN), std::invalid_argument);
  rs.set_weight(30.0);
  CHECK(rs.weight() == 30.0);
}

TEST_CASE("truth rejects values outside [0, 1]") {
  Tape t;
  CHECK_THROWS_AS(truth(t, t.constant(1.5)), std::logic_error);
  CHECK_THROWS_AS(truth(t, t.constant(-0.1)), std::logic_error);
  CHECK_NOTHROW(truth(t, t.constant(0.0)));
}

TEST_CASE("rules share memoised nodes within one call") {
  RuleSet rs(1.0);
  int built = 0;
  auto shared = [&built](Tape& tp, NodeMemo& memo) {
    auto [it, fresh] = memo.try_emplace("atom", NodeId{});
    if (fresh) {
      ++built;
      it->second = tp.constant(0.5);
    }
    return TruthValue{it->second};
  };
  rs.add({"a", [&](Tape& tp, const EvalContext&, NodeMemo& m) { return shared(tp, m); }});
  rs.add({"b", [&](Tape& tp, const EvalContext&, NodeMemo& m) { return shared(tp, m); }});
  Tape t;
  CHECK(t.scalar(rules_loss(t, rs, {})) == 1.0);
  CHECK(built == 1);
}
