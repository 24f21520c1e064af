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

#include "rbmlogic/normal_forms.hpp"

#include <algorithm>
#include <iterator>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

namespace {

bool sorted_intersect(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

void sort_unique(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void canonicalize(std::vector<ConjunctiveClause>& clauses) {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
}

// All total assignments over `vars` accepted by `pred`, as full clauses.
template <typename Pred>
std::vector<ConjunctiveClause> enumerate_models(std::span<const std::size_t> vars,
                                                std::size_t universe, Pred pred) {
  std::vector<ConjunctiveClause> out;
  Assignment a(universe);
  const std::uint64_t count = std::uint64_t{1} << vars.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t k = 0; k < vars.size(); ++k) a.set(vars[k], (mask >> k) & 1U);
    if (!pred(a)) continue;
    ConjunctiveClause c;
    for (std::size_t k = 0; k < vars.size(); ++k)
      ((mask >> k) & 1U ? c.pos : c.neg).push_back(vars[k]);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConjunctiveClause

ConjunctiveClause ConjunctiveClause::make(std::vector<std::size_t> pos,
                                          std::vector<std::size_t> neg) {
  sort_unique(pos);
  sort_unique(neg);
  if (sorted_intersect(pos, neg))
    fail(ErrorKind::precondition, "clause contains a variable with both polarities");
  return ConjunctiveClause{std::move(pos), std::move(neg)};
}

bool ConjunctiveClause::satisfied_by(const Assignment& a) const {
  for (auto t : pos)
    if (!a.value(t)) return false;
  for (auto k : neg)
    if (a.value(k)) return false;
  return true;
}

bool ConjunctiveClause::satisfied_by(std::span<const std::uint8_t> x) const {
  for (auto t : pos)
    if (!x[t]) return false;
  for (auto k : neg)
    if (x[k]) return false;
  return true;
}

bool ConjunctiveClause::excludes(const ConjunctiveClause& other) const {
  return sorted_intersect(pos, other.neg) || sorted_intersect(neg, other.pos);
}

bool ConjunctiveClause::contains(const ConjunctiveClause& other) const {
  return std::includes(pos.begin(), pos.end(), other.pos.begin(), other.pos.end()) &&
         std::includes(neg.begin(), neg.end(), other.neg.begin(), other.neg.end());
}

std::vector<std::size_t> ConjunctiveClause::variables() const {
  std::vector<std::size_t> v;
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(v));
  return v;
}

std::string to_string(const ConjunctiveClause& c, const PropositionTable& table) {
  if (c.empty()) return "true";
  // Literals listed in variable order regardless of polarity.
  std::string out;
  for (auto v : c.variables()) {
    if (!out.empty()) out += " & ";
    if (std::binary_search(c.neg.begin(), c.neg.end(), v)) out += '~';
    out += table.name(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dnf

bool Dnf::satisfied_by(const Assignment& a) const { return count_satisfied(a) > 0; }

std::size_t Dnf::count_satisfied(const Assignment& a) const {
  return static_cast<std::size_t>(std::count_if(
      clauses.begin(), clauses.end(), [&](const auto& c) { return c.satisfied_by(a); }));
}

bool has_exclusivity_certificate(const Dnf& d) {
  for (std::size_t i = 0; i < d.clauses.size(); ++i)
    for (std::size_t j = i + 1; j < d.clauses.size(); ++j)
      if (!d.clauses[i].excludes(d.clauses[j])) return false;
  return true;
}

Dnf to_full_dnf(const Formula& f, std::size_t var_limit) {
  const auto vars = free_variables(f);
  return to_full_dnf(f, vars, var_limit);
}

Dnf to_full_dnf(const Formula& f, std::span<const std::size_t> vars_in, std::size_t var_limit) {
  std::vector<std::size_t> vars(vars_in.begin(), vars_in.end());
  sort_unique(vars);
  const auto free = free_variables(f);
  if (!std::includes(vars.begin(), vars.end(), free.begin(), free.end()))
    fail(ErrorKind::precondition, "variable list does not cover the formula");
  if (vars.size() > var_limit) {
    fail(ErrorKind::limit_exceeded, "formula has " + std::to_string(vars.size()) +
                                        " variables, full DNF limit is " +
                                        std::to_string(var_limit));
  }
  const std::size_t universe = vars.empty() ? 0 : vars.back() + 1;
  Dnf d;
  d.clauses = enumerate_models(vars, universe, [&](const Assignment& a) { return evaluate(f, a); });
  canonicalize(d.clauses);
  d.strict = true;
  return d;
}

// ---------------------------------------------------------------------------
// Implications

std::vector<std::size_t> EliminationOrder::resolve(std::span<const std::size_t> body_vars) const {
  std::vector<std::size_t> vars(body_vars.begin(), body_vars.end());
  std::sort(vars.begin(), vars.end());
  switch (policy) {
    case Policy::ascending_index:
      return vars;
    case Policy::descending_index:
      std::reverse(vars.begin(), vars.end());
      return vars;
    case Policy::explicit_list: {
      std::vector<std::size_t> sorted_order(order);
      std::sort(sorted_order.begin(), sorted_order.end());
      if (sorted_order != vars)
        fail(ErrorKind::precondition, "elimination order must list each body variable once");
      return order;
    }
  }
  return vars;
}

Dnf implication_to_sdnf(std::span<const std::size_t> body_pos,
                        std::span<const std::size_t> body_neg, std::size_t head,
                        const EliminationOrder& order, bool negated_head) {
  std::vector<std::size_t> pos(body_pos.begin(), body_pos.end());
  std::vector<std::size_t> neg(body_neg.begin(), body_neg.end());
  sort_unique(pos);
  sort_unique(neg);
  if (pos.size() != body_pos.size() || neg.size() != body_neg.size())
    fail(ErrorKind::precondition, "implication body lists a literal twice");
  if (sorted_intersect(pos, neg))
    fail(ErrorKind::precondition, "implication body uses a variable with both polarities");
  if (std::binary_search(pos.begin(), pos.end(), head) ||
      std::binary_search(neg.begin(), neg.end(), head))
    fail(ErrorKind::precondition, "implication head occurs in its body");

  Dnf d;
  d.strict = true;
  {
    auto head_pos = pos;
    auto head_neg = neg;
    (negated_head ? head_neg : head_pos).push_back(head);
    d.clauses.push_back(ConjunctiveClause::make(std::move(head_pos), std::move(head_neg)));
  }

  std::vector<std::size_t> body;
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(body));
  const auto sequence = order.resolve(body);

  // Remaining body literals keep their polarity; the eliminated one flips.
  std::vector<bool> eliminated_flag(body.empty() ? 0 : body.back() + 1, false);
  for (std::size_t p : sequence) {
    ConjunctiveClause c;
    for (std::size_t v : body) {
      if (eliminated_flag[v]) continue;
      const bool positive = std::binary_search(pos.begin(), pos.end(), v);
      const bool keep_polarity = v != p;
      (positive == keep_polarity ? c.pos : c.neg).push_back(v);
    }
    d.clauses.push_back(std::move(c));
    eliminated_flag[p] = true;
  }
  return d;
}

// ---------------------------------------------------------------------------
// General DNF -> SDNF

Dnf dnf_to_sdnf(const Dnf& d, std::size_t var_limit) {
  if (has_exclusivity_certificate(d)) {
    Dnf out = d;
    out.strict = true;
    return out;
  }
  std::vector<ConjunctiveClause> clauses = d.clauses;
  canonicalize(clauses);

  // Terminates: each rewrite replaces two clauses by clauses over a strictly
  // larger variable set than at least one of them (multiset ordering).
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> overlap;
    for (std::size_t i = 0; i < clauses.size() && !overlap; ++i)
      for (std::size_t j = i + 1; j < clauses.size(); ++j)
        if (!clauses[i].excludes(clauses[j])) {
          overlap = {i, j};
          break;
        }
    if (!overlap) break;

    const ConjunctiveClause a = clauses[overlap->first];
    const ConjunctiveClause b = clauses[overlap->second];
    auto vars = a.variables();
    const auto bv = b.variables();
    vars.insert(vars.end(), bv.begin(), bv.end());
    sort_unique(vars);
    if (vars.size() > var_limit) {
      fail(ErrorKind::limit_exceeded,
           "overlapping clauses span " + std::to_string(vars.size()) + " variables");
    }
    const std::size_t universe = vars.empty() ? 0 : vars.back() + 1;
    auto replacement = enumerate_models(vars, universe, [&](const Assignment& x) {
      return a.satisfied_by(x) || b.satisfied_by(x);
    });

    clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(overlap->second));
    clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(overlap->first));
    clauses.insert(clauses.end(), replacement.begin(), replacement.end());
    canonicalize(clauses);
  }
  return Dnf{std::move(clauses), true};
}

// ---------------------------------------------------------------------------
// Shape recognition

namespace {

// Appends the literals of a conjunction tree; false if a non-literal occurs.
bool collect_conjuncts(const Formula& f, std::vector<std::size_t>& pos,
                       std::vector<std::size_t>& neg, bool& contradiction) {
  switch (f.connective()) {
    case Connective::conjunction:
      return collect_conjuncts(f.lhs(), pos, neg, contradiction) &&
             collect_conjuncts(f.rhs(), pos, neg, contradiction);
    case Connective::var:
      pos.push_back(f.var_index());
      return true;
    case Connective::negation:
      if (f.lhs().connective() != Connective::var) return false;
      neg.push_back(f.lhs().var_index());
      return true;
    case Connective::top:
      return true;
    case Connective::bottom:
      contradiction = true;
      return true;
    default:
      return false;
  }
}

void collect_disjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.connective() == Connective::disjunction) {
    collect_disjuncts(f.lhs(), out);
    collect_disjuncts(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

std::optional<ImplicationShape> as_implication(const Formula& f) {
  if (f.connective() != Connective::implication) return std::nullopt;
  ImplicationShape shape;
  Formula head = f.rhs();
  if (head.connective() == Connective::negation) {
    shape.negated_head = true;
    head = head.lhs();
  }
  if (head.connective() != Connective::var) return std::nullopt;
  shape.head = head.var_index();
  bool contradiction = false;
  if (!collect_conjuncts(f.lhs(), shape.body_pos, shape.body_neg, contradiction))
    return std::nullopt;
  if (contradiction) return std::nullopt;
  sort_unique(shape.body_pos);
  sort_unique(shape.body_neg);
  if (shape.body_pos.empty() && shape.body_neg.empty()) return std::nullopt;
  if (sorted_intersect(shape.body_pos, shape.body_neg)) return std::nullopt;
  if (std::binary_search(shape.body_pos.begin(), shape.body_pos.end(), shape.head) ||
      std::binary_search(shape.body_neg.begin(), shape.body_neg.end(), shape.head))
    return std::nullopt;
  return shape;
}

std::optional<Dnf> as_syntactic_dnf(const Formula& f) {
  std::vector<Formula> disjuncts;
  collect_disjuncts(f, disjuncts);
  Dnf d;
  for (const auto& g : disjuncts) {
    std::vector<std::size_t> pos, neg;
    bool contradiction = false;
    if (!collect_conjuncts(g, pos, neg, contradiction)) return std::nullopt;
    sort_unique(pos);
    sort_unique(neg);
    if (contradiction || sorted_intersect(pos, neg)) continue;
    d.clauses.push_back(ConjunctiveClause{std::move(pos), std::move(neg)});
  }
  canonicalize(d.clauses);
  d.strict = has_exclusivity_certificate(d);
  return d;
}

}  // namespace rbmlogic
