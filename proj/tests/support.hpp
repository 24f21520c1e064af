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

// Independent oracles and random instance generators shared by the tests.
// Oracles deliberately avoid the library routines they are used to check.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rbmlogic/compiler.hpp"
#include "rbmlogic/formula.hpp"
#include "rbmlogic/rbm.hpp"

namespace testing {

using namespace rbmlogic;

inline std::string kb_path(const std::string& file) { return std::string(RBMLOGIC_KB_DIR) + "/" + file; }

/// Bit i of `mask` is visible unit i.
inline BitVector bits_of(std::uint64_t mask, std::size_t n) {
  BitVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1U;
  return x;
}

/// Truth-table semantics written out per connective.
inline bool oracle_eval(const Formula& f, const BitVector& x) {
  switch (f.connective()) {
    case Connective::var: return x.at(f.var_index()) != 0;
    case Connective::top: return true;
    case Connective::bottom: return false;
    case Connective::negation: return !oracle_eval(f.lhs(), x);
    case Connective::conjunction: return oracle_eval(f.lhs(), x) && oracle_eval(f.rhs(), x);
    case Connective::disjunction: return oracle_eval(f.lhs(), x) || oracle_eval(f.rhs(), x);
    case Connective::implication: return !oracle_eval(f.lhs(), x) || oracle_eval(f.rhs(), x);
    case Connective::equivalence: return oracle_eval(f.lhs(), x) == oracle_eval(f.rhs(), x);
    case Connective::exclusive_or: return oracle_eval(f.lhs(), x) != oracle_eval(f.rhs(), x);
  }
  return false;
}

inline double oracle_weighted_sat(const KnowledgeBase& kb, const BitVector& x) {
  double s = 0.0;
  for (const auto& item : kb.items)
    if (oracle_eval(item.formula, x)) s += item.weight;
  return s;
}

/// Energy written out from the definition.
inline double oracle_energy(const Rbm& m, const BitVector& x, const BitVector& h) {
  double e = m.offset;
  for (std::size_t i = 0; i < m.n_visible; ++i) {
    e -= m.visible_bias[i] * x[i];
    for (std::size_t j = 0; j < m.n_hidden; ++j) e -= m.weights[i * m.n_hidden + j] * x[i] * h[j];
  }
  for (std::size_t j = 0; j < m.n_hidden; ++j) e -= m.hidden_bias[j] * h[j];
  return e;
}

/// min over every hidden configuration. Above 12 hidden units each unit is
/// minimised on its own (the energy is a sum of per-unit terms); the
/// enumeration branch checks that reading on small networks.
inline double oracle_energy_rank(const Rbm& m, const BitVector& x) {
  if (m.n_hidden > 12) {
    BitVector h(m.n_hidden, 0);
    for (std::size_t j = 0; j < m.n_hidden; ++j) {
      BitVector off = h, on = h;
      on[j] = 1;
      h[j] = oracle_energy(m, x, on) < oracle_energy(m, x, off) ? 1 : 0;
    }
    return oracle_energy(m, x, h);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << m.n_hidden); ++hm)
    best = std::min(best, oracle_energy(m, x, bits_of(hm, m.n_hidden)));
  return best;
}

/// -T log sum_h exp(-E/T) by enumeration.
inline double oracle_free_energy(const Rbm& m, const BitVector& x) {
  std::vector<double> terms;
  for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << m.n_hidden); ++hm)
    terms.push_back(-oracle_energy(m, x, bits_of(hm, m.n_hidden)) / m.temperature);
  double peak = -std::numeric_limits<double>::infinity();
  for (double t : terms) peak = std::max(peak, t);
  double z = 0.0;
  for (double t : terms) z += std::exp(t - peak);
  return -m.temperature * (peak + std::log(z));
}

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

inline Formula random_formula(Rng& rng, std::size_t n_vars, int depth) {
  if (depth <= 0 || uniform01(rng) < 0.25) {
    Formula v = Formula::var(pick(rng, n_vars));
    return uniform01(rng) < 0.3 ? Formula::negation(v) : v;
  }
  Formula a = random_formula(rng, n_vars, depth - 1);
  Formula b = random_formula(rng, n_vars, depth - 1);
  switch (pick(rng, 6)) {
    case 0: return Formula::conjunction(a, b);
    case 1: return Formula::disjunction(a, b);
    case 2: return Formula::implication(a, b);
    case 3: return Formula::equivalence(a, b);
    case 4: return Formula::exclusive_or(a, b);
    default: return Formula::negation(a);
  }
}

inline std::vector<std::string> var_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  return names;
}

/// Log-uniform weight in [lo, hi].
inline double random_weight(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
}

/// Random weighted KB whose table holds exactly `n_vars` propositions.
/// Roughly a third of the formulas are implications with literal bodies,
/// a third syntactic DNFs and the rest arbitrary formulas.
inline KnowledgeBase random_kb(Rng& rng, std::size_t n_vars, std::size_t n_formulas, double wlo,
                               double whi) {
  KnowledgeBase kb;
  const auto names = var_names(n_vars);
  kb.table = PropositionTable(names);
  for (std::size_t k = 0; k < n_formulas; ++k) {
    Formula f;
    const auto kind = pick(rng, 3);
    if (kind == 0 && n_vars >= 2) {
      const std::size_t head = pick(rng, n_vars);
      Formula body;
      bool have = false;
      for (std::size_t v = 0; v < n_vars; ++v) {
        if (v == head || uniform01(rng) < 0.5) continue;
        Formula lit = uniform01(rng) < 0.5 ? Formula::var(v) : Formula::negation(Formula::var(v));
        body = have ? Formula::conjunction(body, lit) : lit;
        have = true;
      }
      if (!have) body = Formula::var((head + 1) % n_vars);
      f = Formula::implication(body, Formula::var(head));
    } else if (kind == 1) {
      const std::size_t terms = 1 + pick(rng, 3);
      for (std::size_t t = 0; t < terms; ++t) {
        Formula conj;
        bool have = false;
        for (std::size_t v = 0; v < n_vars; ++v) {
          if (uniform01(rng) < 0.6) continue;
          Formula lit = uniform01(rng) < 0.5 ? Formula::var(v) : Formula::negation(Formula::var(v));
          conj = have ? Formula::conjunction(conj, lit) : lit;
          have = true;
        }
        if (!have) conj = Formula::var(pick(rng, n_vars));
        f = t == 0 ? conj : Formula::disjunction(f, conj);
      }
    } else {
      f = random_formula(rng, n_vars, 3);
    }
    kb.items.push_back({random_weight(rng, wlo, whi), f, to_string(f, kb.table)});
  }
  return kb;
}

inline Rbm random_rbm(Rng& rng, std::size_t nv, std::size_t nh, double scale) {
  Rbm m(nv, nh);
  for (double& w : m.weights) w = uniform(rng, -scale, scale);
  for (double& a : m.visible_bias) a = uniform(rng, -scale, scale);
  for (double& b : m.hidden_bias) b = uniform(rng, -scale, scale);
  m.offset = uniform(rng, -1.0, 1.0);
  return m;
}

/// Random ClauseBase of unique non-empty clauses with confidences in [lo, hi].
inline ClauseBase random_clause_base(Rng& rng, std::size_t n_vars, std::size_t n_clauses, double lo,
                                     double hi) {
  ClauseBase base;
  base.table = PropositionTable(var_names(n_vars));
  std::vector<WeightedClause> raw;
  for (std::size_t k = 0; k < n_clauses; ++k) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t v = 0; v < n_vars; ++v) {
      const double u = uniform01(rng);
      if (u < 0.3) pos.push_back(v);
      else if (u < 0.6) neg.push_back(v);
    }
    if (pos.empty() && neg.empty()) pos.push_back(pick(rng, n_vars));
    raw.push_back({ConjunctiveClause::make(pos, neg), uniform(rng, lo, hi), ""});
  }
  // Keep the first occurrence of each clause so confidences stay in range.
  for (auto& wc : raw) {
    bool dup = false;
    for (const auto& kept : base.clauses) dup = dup || kept.clause == wc.clause;
    if (!dup) base.clauses.push_back(wc);
  }
  return base;
}

}  // namespace testing
