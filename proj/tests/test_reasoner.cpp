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

#include <cmath>

#include "rbmlogic/compiler.hpp"
#include "rbmlogic/error.hpp"
#include "rbmlogic/reasoner.hpp"
#include "support.hpp"

using namespace rbmlogic;
using testing::bits_of;

namespace {

Assignment evidence_of(const PropositionTable& t, std::initializer_list<std::pair<const char*, bool>> kv) {
  Assignment a(t.size());
  for (const auto& [name, value] : kv) a.set(t.index_of(name), value);
  return a;
}

bool non_increasing(const std::vector<double>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k)
    if (trace[k] > trace[k - 1] + 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("query modes parse") {
  CHECK(parse_query_mode("gibbs") == QueryMode::gibbs);
  CHECK(parse_query_mode("deterministic") == QueryMode::deterministic);
  CHECK(parse_query_mode("conditional") == QueryMode::conditional);
  CHECK(parse_query_mode("exact") == QueryMode::exact);
  CHECK(std::string(to_string(QueryMode::exact)) == "exact");
  CHECK_THROWS_AS(parse_query_mode("bogus"), Error);
}

TEST_CASE("brute-force MaxSAT on the Nixon diamond") {
  const auto kb = load_knowledge_base(testing::kb_path("nixon.kb"));
  const auto& t = kb.table;
  const auto res = brute_force_maxsat(kb, evidence_of(t, {{"n", true}}));
  CHECK(res.score == 2010.0);
  REQUIRE(res.best.size() == 2);
  for (const auto& x : res.best) {
    CHECK(x[t.index_of("n")] == 1);
    CHECK(x[t.index_of("r")] == 1);
    CHECK(x[t.index_of("q")] == 1);
  }
  CHECK(res.best[0][t.index_of("p")] != res.best[1][t.index_of("p")]);
  CHECK(res.best[0] < res.best[1]);

  const auto free = brute_force_maxsat(kb, Assignment(t.size()));
  CHECK(free.score == 2020.0);
}

TEST_CASE("brute-force MaxSAT edge cases") {
  KnowledgeBase empty;
  empty.table = PropositionTable(testing::var_names(2));
  const auto res = brute_force_maxsat(empty, Assignment(2));
  CHECK(res.score == 0.0);
  CHECK(res.best.size() == 4);
  const auto kb = load_knowledge_base(testing::kb_path("xor.kb"));
  const auto x = brute_force_maxsat(kb, evidence_of(kb.table, {{"x", true}, {"y", true}}));
  REQUIRE(x.best.size() == 1);
  CHECK(x.best[0] == BitVector{1, 1, 0});
  CHECK_THROWS_AS(brute_force_maxsat(kb, Assignment(3), 2), Error);
}

TEST_CASE("anneal schedule is geometric from tau_start to tau_end") {
  GibbsConfig cfg;
  CHECK(anneal_temperature(cfg, 0) == doctest::Approx(1.0));
  CHECK(anneal_temperature(cfg, cfg.steps - 1) == doctest::Approx(0.05));
  const double r1 = anneal_temperature(cfg, 1) / anneal_temperature(cfg, 0);
  const double r2 = anneal_temperature(cfg, 51) / anneal_temperature(cfg, 50);
  CHECK(r1 == doctest::Approx(r2));
}

TEST_CASE("exact inference matches brute-force MaxSAT on compiled networks") {
  Rng rng = make_rng(31);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + testing::pick(rng, 5);
    const auto kb = testing::random_kb(rng, n, 1 + testing::pick(rng, 4), 1.0, 10.0);
    const Model m = compile_kb(kb, {}).model;
    Assignment ev(n);
    for (std::size_t i = 0; i < n; ++i)
      if (uniform01(rng) < 0.3) ev.set(i, uniform01(rng) < 0.5);
    const auto sat = brute_force_maxsat(kb, ev);
    const auto rep = infer_exact(m.rbm, ev);
    CHECK(testing::oracle_weighted_sat(kb, rep.assignment) == doctest::Approx(sat.score));
    CHECK(-rep.energy_rank / 0.5 == doctest::Approx(sat.score));
    for (auto i : ev.assigned_indices()) CHECK(rep.assignment[i] == ev.value(i));
  }
}

TEST_CASE("Gibbs inference finds the optimum on XOR and Nixon") {
  const auto xor_kb = load_knowledge_base(testing::kb_path("xor.kb"));
  const Model xm = compile_kb(xor_kb, {}).model;
  GibbsConfig cfg;
  cfg.seed = 3;
  auto rep = infer_gibbs(xm.rbm, evidence_of(xor_kb.table, {{"x", true}, {"y", false}}), cfg);
  CHECK(rep.assignment == BitVector{1, 0, 1});
  CHECK(rep.energy_rank == doctest::Approx(-0.5));
  CHECK(rep.traces.size() == cfg.restarts);
  for (const auto& tr : rep.traces) CHECK(tr.size() == cfg.steps + 1);

  const auto nixon = load_knowledge_base(testing::kb_path("nixon.kb"));
  const Model nm = compile_kb(nixon, {}).model;
  rep = infer_gibbs(nm.rbm, evidence_of(nixon.table, {{"n", true}}), cfg);
  CHECK(testing::oracle_weighted_sat(nixon, rep.assignment) == 2010.0);
  CHECK(-rep.energy_rank / 0.5 == doctest::Approx(2010.0));
}

TEST_CASE("Gibbs inference is reproducible and respects evidence") {
  Rng rng = make_rng(32);
  const Rbm m = testing::random_rbm(rng, 7, 5, 2.0);
  Assignment ev(7);
  ev.set(2, true);
  ev.set(5, false);
  GibbsConfig cfg;
  cfg.steps = 50;
  cfg.restarts = 3;
  cfg.seed = 99;
  const auto a = infer_gibbs(m, ev, cfg);
  const auto b = infer_gibbs(m, ev, cfg);
  CHECK(a.assignment == b.assignment);
  CHECK(a.traces == b.traces);
  CHECK(a.assignment[2] == 1);
  CHECK(a.assignment[5] == 0);
  CHECK(a.energy_rank == doctest::Approx(energy_rank(m, a.assignment)));
  double best = a.energy_rank;
  for (const auto& tr : a.traces)
    for (double e : tr) CHECK(e >= best - 1e-12);
}

TEST_CASE("deterministic descent: XOR with x = y = 1 gives z = 0") {
  const auto kb = load_knowledge_base(testing::kb_path("xor.kb"));
  const Model m = compile_kb(kb, {}).model;
  DescentConfig cfg;
  const auto rep = infer_deterministic(m.rbm, evidence_of(kb.table, {{"x", true}, {"y", true}}), cfg);
  CHECK(rep.assignment == BitVector{1, 1, 0});
  CHECK(rep.energy_rank == doctest::Approx(-0.5));
}

TEST_CASE("deterministic descent never increases the energy rank") {
  Rng rng = make_rng(33);
  for (int k = 0; k < 300; ++k) {
    const std::size_t nv = 2 + testing::pick(rng, 8), nh = 1 + testing::pick(rng, 8);
    const Rbm m = testing::random_rbm(rng, nv, nh, 3.0);
    Assignment clamp(nv);
    BitVector start(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      start[i] = uniform01(rng) < 0.5;
      if (uniform01(rng) < 0.3) clamp.set(i, start[i] != 0);
    }
    const auto run = descend(m, clamp, start, 50);
    CHECK(run.trace.front() == doctest::Approx(energy_rank(m, start)));
    CHECK(non_increasing(run.trace));
    for (auto i : clamp.assigned_indices()) CHECK(run.state[i] == start[i]);
  }
}

TEST_CASE("Nixon descent sweep from r = q = p = 0 does not raise the energy") {
  const auto kb = load_knowledge_base(testing::kb_path("nixon.kb"));
  const Model m = compile_kb(kb, {}).model;
  const auto& t = kb.table;
  const Assignment clamp = evidence_of(t, {{"n", true}});
  BitVector start(t.size(), 0);
  start[t.index_of("n")] = 1;
  const auto run = descend(m.rbm, clamp, start, 1);
  REQUIRE(run.trace.size() >= 2);
  CHECK(run.trace[1] <= run.trace[0]);
}

TEST_CASE("conditional inference") {
  SUBCASE("zero-weight network is uniform") {
    Rbm m(3, 2);
    Assignment ev(3);
    ev.set(0, true);
    const std::vector<std::size_t> targets{1, 2};
    const auto res = infer_conditional(m, ev, targets);
    REQUIRE(res.probabilities.size() == 4);
    for (double p : res.probabilities) CHECK(p == doctest::Approx(0.25));
    for (double p : res.marginals) CHECK(p == doctest::Approx(0.5));
    CHECK(res.decision == BitVector{1, 1});
  }
  SUBCASE("XOR prefers the consistent value of z") {
    const auto kb = load_knowledge_base(testing::kb_path("xor.kb"));
    const Model m = compile_kb(kb, {}).model;
    const std::vector<std::size_t> targets{2};
    const auto res = infer_conditional(m.rbm, evidence_of(kb.table, {{"x", true}, {"y", true}}), targets);
    CHECK(res.probabilities[0] > res.probabilities[1]);
    CHECK(res.decision == BitVector{0});
    CHECK(res.map_index == 0);
  }
  SUBCASE("probabilities follow exp(-F / tau)") {
    Rng rng = make_rng(34);
    Rbm m = testing::random_rbm(rng, 4, 3, 1.5);
    m.temperature = 0.8;
    Assignment ev(4);
    ev.set(1, false);
    ev.set(3, true);
    const std::vector<std::size_t> targets{2, 0};
    const auto res = infer_conditional(m, ev, targets);
    double z = 0.0;
    std::vector<double> w(4);
    for (std::uint64_t c = 0; c < 4; ++c) {
      BitVector x{static_cast<std::uint8_t>((c >> 1) & 1), 0, static_cast<std::uint8_t>(c & 1), 1};
      w[c] = std::exp(-testing::oracle_free_energy(m, x) / m.temperature);
      z += w[c];
    }
    for (std::uint64_t c = 0; c < 4; ++c) CHECK(res.probabilities[c] == doctest::Approx(w[c] / z));
    CHECK(res.configs[1] == BitVector{1, 0});
  }
  SUBCASE("low temperature agrees with MaxSAT") {
    const auto kb = load_knowledge_base(testing::kb_path("nixon.kb"));
    Model m = compile_kb(kb, {}).model;
    m.rbm.temperature = 0.05;
    const auto& t = kb.table;
    const std::vector<std::size_t> targets{t.index_of("r"), t.index_of("q")};
    const auto res = infer_conditional(m.rbm, evidence_of(t, {{"n", true}, {"p", false}}), targets);
    CHECK(res.decision == BitVector{1, 1});
  }
  SUBCASE("preconditions") {
    Rbm m(3, 1);
    Assignment ev(3);
    ev.set(0, true);
    const std::vector<std::size_t> partial{1};
    CHECK_THROWS_AS(infer_conditional(m, ev, partial), Error);
    const std::vector<std::size_t> overlap{0, 1, 2};
    CHECK_THROWS_AS(infer_conditional(m, ev, overlap), Error);
    m.temperature = 0.0;
    const std::vector<std::size_t> rest{1, 2};
    CHECK_THROWS_AS(infer_conditional(m, ev, rest), Error);
  }
}

TEST_CASE("verify_equivalence on compiled and perturbed models") {
  const auto kb = load_knowledge_base(testing::kb_path("nixon.kb"));
  Model m = compile_kb(kb, {}).model;
  auto rep = verify_equivalence(m, kb, 0.5);
  CHECK(rep.max_deviation <= 1e-9);
  CHECK(rep.rows.size() == 16);
  m.rbm.hidden_bias[0] += 3.0;
  rep = verify_equivalence(m, kb, 0.5);
  CHECK(rep.max_deviation > 1.0);
  CHECK(rep.witness.size() == 4);
}

TEST_CASE("verify_equivalence matches knowledge-base names to visible units") {
  const auto kb = load_knowledge_base(testing::kb_path("xor.kb"));
  Model m = compile_kb(kb, {}).model;
  // The same network over a table with a different proposition order.
  const auto reordered = parse_knowledge_base("(x ^ y) <-> z", PropositionTable(std::vector<std::string>{"z", "y", "x"}));
  CHECK(verify_equivalence(m, reordered, 0.5).max_deviation <= 1e-9);
  const auto unknown = parse_knowledge_base("w | x");
  CHECK_THROWS_AS(verify_equivalence(m, unknown, 0.5), Error);
  Model big;
  big.rbm = Rbm(17, 0);
  big.names = testing::var_names(17);
  KnowledgeBase empty;
  CHECK_THROWS_AS(verify_equivalence(big, empty, 0.5), Error);
}
