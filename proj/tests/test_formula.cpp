// Copyright 2026 The rbmlogic Authors
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

#include <doctest.h>

#include "rbmlogic/error.hpp"
#include "rbmlogic/formula.hpp"
#include "support.hpp"

using namespace rbmlogic;
using testing::bits_of;

namespace {

Formula parse(const char* text, PropositionTable& t) { return parse_formula(text, t); }

Formula v(std::size_t i) { return Formula::var(i); }

}  // namespace

TEST_CASE("proposition table interns names in order of first appearance") {
  PropositionTable t;
  CHECK(t.intern("b") == 0);
  CHECK(t.intern("a") == 1);
  CHECK(t.intern("b") == 0);
  CHECK(t.size() == 2);
  CHECK(t.find("a") == std::optional<std::size_t>(1));
  CHECK_FALSE(t.find("c").has_value());
  CHECK_THROWS_AS(t.index_of("c"), Error);
  CHECK(t.name(1) == "a");
}

TEST_CASE("precedence: ~ binds tightest, then &, ^, |, implication, <->") {
  PropositionTable t;
  for (const char* n : {"a", "b", "c", "d"}) t.intern(n);
  CHECK(parse("a | b & c", t) == Formula::disjunction(v(0), Formula::conjunction(v(1), v(2))));
  CHECK(parse("a ^ b & c", t) == Formula::exclusive_or(v(0), Formula::conjunction(v(1), v(2))));
  CHECK(parse("a | b ^ c", t) == Formula::disjunction(v(0), Formula::exclusive_or(v(1), v(2))));
  CHECK(parse("~a & b", t) == Formula::conjunction(Formula::negation(v(0)), v(1)));
  CHECK(parse("a <- b | c", t) == Formula::implication(Formula::disjunction(v(1), v(2)), v(0)));
  CHECK(parse("b -> a", t) == Formula::implication(v(1), v(0)));
  CHECK(parse("a <-> b <-> c", t) ==
        Formula::equivalence(Formula::equivalence(v(0), v(1)), v(2)));
  CHECK(parse("a <-> b <- c", t) == Formula::equivalence(v(0), Formula::implication(v(2), v(1))));
  CHECK(parse("(a | b) & c", t) == Formula::conjunction(Formula::disjunction(v(0), v(1)), v(2)));
  CHECK(parse("a & b & c", t) == Formula::conjunction(Formula::conjunction(v(0), v(1)), v(2)));
  CHECK(parse("true & ~false", t) == Formula::conjunction(Formula::top(), Formula::negation(Formula::bottom())));
}

TEST_CASE("implications do not chain") {
  PropositionTable t;
  CHECK_THROWS_AS(parse("a <- b <- c", t), ParseError);
  CHECK_THROWS_AS(parse("a -> b -> c", t), ParseError);
  CHECK_NOTHROW(parse("a <- (b <- c)", t));
}

TEST_CASE("malformed formulas report line and column") {
  PropositionTable t;
  for (const char* bad : {"a &", "& a", "(a | b", "a b", "a | | b", "", "a <-", "1a"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse(bad, t), ParseError);
  }
  try {
    parse_knowledge_base("a & b\nc & (d\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 1);
  }
}

TEST_CASE("knowledge base lines: weights, comments, blank lines") {
  const auto kb = parse_knowledge_base(
      "# comment\n\n1000: r <- n   # trailing\n+2.5: ~p <- r\n  q\n-1: p\n");
  REQUIRE(kb.items.size() == 4);
  CHECK(kb.items[0].weight == 1000.0);
  CHECK(kb.items[1].weight == 2.5);
  CHECK(kb.items[2].weight == 1.0);
  CHECK(kb.items[3].weight == -1.0);
  CHECK(kb.table.names() == std::vector<std::string>{"r", "n", "p", "q"});
  CHECK(kb.items[0].text == "r <- n");
  CHECK_THROWS_AS(parse_knowledge_base("nan: a\n"), ParseError);
  CHECK_THROWS_AS(parse_knowledge_base("1e400: a\n"), ParseError);
  CHECK_THROWS_AS(parse_knowledge_base("2: \n"), ParseError);
}

TEST_CASE("seed table keeps existing positions") {
  std::vector<std::string> names{"x", "y"};
  const auto kb = parse_knowledge_base("z <- y", PropositionTable(names));
  CHECK(kb.table.names() == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("connective truth tables") {
  PropositionTable t;
  t.intern("a");
  t.intern("b");
  struct Row {
    const char* text;
    bool expect[4];  // (a,b) = 00, 10, 01, 11
  };
  const Row rows[] = {
      {"a & b", {false, false, false, true}},   {"a | b", {false, true, true, true}},
      {"a ^ b", {false, true, true, false}},    {"a <-> b", {true, false, false, true}},
      {"a <- b", {true, true, false, true}},    {"a -> b", {true, false, true, true}},
      {"~a", {true, false, true, false}},       {"true", {true, true, true, true}},
      {"false", {false, false, false, false}},
  };
  for (const auto& r : rows) {
    const Formula f = parse(r.text, t);
    for (std::uint64_t m = 0; m < 4; ++m) {
      CAPTURE(r.text);
      CAPTURE(m);
      CHECK(evaluate(f, Assignment::from_mask(m, 2)) == r.expect[m]);
    }
  }
}

TEST_CASE("evaluate requires every variable to be assigned") {
  PropositionTable t;
  const Formula f = parse("a | b", t);
  Assignment a(2);
  a.set(0, true);
  CHECK_THROWS_AS(evaluate(f, a), Error);
}

TEST_CASE("printing round-trips through the parser") {
  Rng rng = make_rng(7);
  const auto names = testing::var_names(5);
  PropositionTable t(names);
  for (int k = 0; k < 500; ++k) {
    const Formula f = testing::random_formula(rng, 5, 4);
    const std::string text = to_string(f, t);
    CAPTURE(text);
    PropositionTable t2(names);
    CHECK(parse_formula(text, t2) == f);
  }
}

TEST_CASE("evaluate agrees with the truth-table oracle") {
  Rng rng = make_rng(11);
  for (int k = 0; k < 300; ++k) {
    const Formula f = testing::random_formula(rng, 4, 4);
    for (std::uint64_t m = 0; m < 16; ++m)
      CHECK(evaluate(f, Assignment::from_mask(m, 4)) == testing::oracle_eval(f, bits_of(m, 4)));
  }
}

TEST_CASE("weighted satisfiability of the Nixon knowledge base") {
  const auto kb = load_knowledge_base(testing::kb_path("nixon.kb"));
  REQUIRE(kb.items.size() == 4);
  const auto& t = kb.table;
  auto at = [&](bool n, bool r, bool q, bool p) {
    Assignment a(t.size());
    a.set(t.index_of("n"), n);
    a.set(t.index_of("r"), r);
    a.set(t.index_of("q"), q);
    a.set(t.index_of("p"), p);
    return weighted_sat(kb, a);
  };
  CHECK(at(true, true, true, true) == 2010.0);
  CHECK(at(false, false, false, false) == 2020.0);
  CHECK(at(true, true, true, false) == 2010.0);
  CHECK(at(true, false, false, false) == 20.0);
}

TEST_CASE("assignments") {
  const auto a = Assignment::from_mask(0b101, 3);
  CHECK(a.is_total());
  CHECK(a.bits() == BitVector{1, 0, 1});
  Assignment b(3);
  b.set(1, true);
  CHECK(b.assigned_indices() == std::vector<std::size_t>{1});
  CHECK(b.unassigned_indices() == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(b.value(0), Error);
  b.clear(1);
  CHECK(b.assigned_indices().empty());
  CHECK(free_variables(Formula::conjunction(v(3), Formula::negation(v(1)))) ==
        std::vector<std::size_t>{1, 3});
}
