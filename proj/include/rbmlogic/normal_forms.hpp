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

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbmlogic/formula.hpp"

namespace rbmlogic {

/// Conjunction of literals: every index in `pos` true, every index in `neg`
/// false. Both lists are sorted and disjoint. Empty clause is always true.
struct ConjunctiveClause {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;

  /// Sorts, removes duplicates and checks disjointness.
  static ConjunctiveClause make(std::vector<std::size_t> pos, std::vector<std::size_t> neg);

  std::size_t size() const noexcept { return pos.size() + neg.size(); }
  bool empty() const noexcept { return pos.empty() && neg.empty(); }
  bool satisfied_by(const Assignment& a) const;
  bool satisfied_by(std::span<const std::uint8_t> x) const;
  /// True iff the clauses contain a complementary literal pair, which for
  /// conjunctions is equivalent to "never both true".
  bool excludes(const ConjunctiveClause& other) const;
  /// True iff every literal of `other` occurs in this clause.
  bool contains(const ConjunctiveClause& other) const;
  std::vector<std::size_t> variables() const;

  auto operator<=>(const ConjunctiveClause&) const = default;
  bool operator==(const ConjunctiveClause&) const = default;
};

std::string to_string(const ConjunctiveClause& c, const PropositionTable& table);

struct Dnf {
  std::vector<ConjunctiveClause> clauses;
  bool strict = false;

  bool satisfied_by(const Assignment& a) const;
  /// Number of clauses satisfied by `a`.
  std::size_t count_satisfied(const Assignment& a) const;
};

/// Pairwise complementary-literal check over all clause pairs.
bool has_exclusivity_certificate(const Dnf& d);

constexpr std::size_t kDefaultFdnfLimit = 20;

/// One clause per model of `f` over its free variables, canonically ordered.
Dnf to_full_dnf(const Formula& f, std::size_t var_limit = kDefaultFdnfLimit);
/// Same, but every clause mentions all of `vars` (a superset of the free
/// variables of `f`).
Dnf to_full_dnf(const Formula& f, std::span<const std::size_t> vars,
                std::size_t var_limit = kDefaultFdnfLimit);

/// Order in which body variables are moved out of the disjunctive part of an
/// implication.
struct EliminationOrder {
  enum class Policy { descending_index, ascending_index, explicit_list };
  Policy policy = Policy::descending_index;
  std::vector<std::size_t> order;  // used with explicit_list

  std::vector<std::size_t> resolve(std::span<const std::size_t> body_vars) const;
};

/// head <- AND(pos) & AND(~neg), split into the head clause followed by one
/// clause per eliminated body variable. Emits exactly |pos|+|neg|+1 clauses.
/// With `negated_head` the head literal is ~head.
Dnf implication_to_sdnf(std::span<const std::size_t> body_pos,
                        std::span<const std::size_t> body_neg, std::size_t head,
                        const EliminationOrder& order = {}, bool negated_head = false);

/// Repeatedly replaces an overlapping clause pair by the full DNF of their
/// disjunction over the union of their variables until no pair overlaps.
Dnf dnf_to_sdnf(const Dnf& d, std::size_t var_limit = kDefaultFdnfLimit);

struct ImplicationShape {
  std::vector<std::size_t> body_pos;
  std::vector<std::size_t> body_neg;
  std::size_t head = 0;
  bool negated_head = false;
};

/// Recognises `l <- l1 & ... & ln` where every l is a literal, the body
/// variables are distinct and exclude the head variable, and n >= 1.
std::optional<ImplicationShape> as_implication(const Formula& f);

/// Recognises a disjunction of conjunctions of literals. Contradictory
/// conjunctions are dropped.
std::optional<Dnf> as_syntactic_dnf(const Formula& f);

}  // namespace rbmlogic
