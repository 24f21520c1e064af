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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rbmlogic/formula.hpp"
#include "rbmlogic/model.hpp"
#include "rbmlogic/normal_forms.hpp"
#include "rbmlogic/rbm.hpp"

namespace rbmlogic {

struct WeightedClause {
  ConjunctiveClause clause;
  double confidence = 1.0;  // c >= 0
  std::string source;

  bool operator==(const WeightedClause&) const = default;
};

/// Unique weighted clauses in canonical (pos, neg) order.
struct ClauseBase {
  PropositionTable table;
  std::vector<WeightedClause> clauses;
};

struct CompileOptions {
  double epsilon = 0.5;  // 0 < epsilon < 1
  EliminationOrder elimination;
  /// Also fold clauses subsumed by a more general clause into it. Changes
  /// the weighted satisfiability the network encodes.
  bool subsumption_merge = false;
  /// Encode single-literal clauses as visible biases instead of hidden units.
  bool fold_unit_clauses = false;
  std::size_t fdnf_limit = kDefaultFdnfLimit;

  void validate() const;
};

/// How a single formula was turned into strict clauses.
enum class SdnfRoute { implication, syntactic_dnf, full_dnf };
const char* to_string(SdnfRoute route);

struct FormulaReport {
  std::string text;
  double weight = 1.0;
  SdnfRoute route = SdnfRoute::full_dnf;
  std::size_t clause_count = 0;
};

struct CompiledKb {
  Model model;
  ClauseBase clause_base;
  std::vector<FormulaReport> formulas;
};

/// Strict DNF of one formula, choosing the cheapest available route.
Dnf formula_to_sdnf(const Formula& f, const CompileOptions& opts, SdnfRoute* route = nullptr);

/// Identical clauses are always merged by summing confidences; with
/// `subsumption` a clause containing a more general one is folded into it.
/// Output is in canonical order.
std::vector<WeightedClause> merge_clauses(std::vector<WeightedClause> clauses, bool subsumption);

/// One hidden unit per clause (in the given order): weights +-c, bias
/// c * (epsilon - |pos|). The empty clause lowers the energy offset by
/// c * epsilon; with fold_unit_clauses, single literals become visible biases.
Model compile_clauses(const ClauseBase& base, const CompileOptions& opts);

/// Unit-confidence network of a strict DNF. energy_rank = -epsilon * s(x).
Model compile_sdnf(const Dnf& d, const PropositionTable& table, const CompileOptions& opts);

/// head <- body with |pos| + |neg| hidden units; the last eliminated body
/// variable is carried by a visible bias.
Model compile_implication(std::span<const std::size_t> body_pos,
                          std::span<const std::size_t> body_neg, std::size_t head,
                          const PropositionTable& table, const CompileOptions& opts);

/// Weighted knowledge base to network with weighted_sat = -energy_rank / eps.
CompiledKb compile_kb(const KnowledgeBase& kb, const CompileOptions& opts);

/// Quadratic penalty network for a Horn clause. Its energy rank equals
/// 2 * (SDNF energy rank) + 1, i.e. 1 on violating assignments and 0 otherwise
/// at epsilon = 0.5.
Model compile_penalty_horn(std::span<const std::size_t> body_pos, std::size_t head,
                           const PropositionTable& table, double epsilon = 0.5,
                           const EliminationOrder& order = {});
/// Sum of weighted penalty networks; every formula must be a Horn clause.
Model compile_penalty_kb(const KnowledgeBase& kb, const CompileOptions& opts);

/// One hidden unit per model v of a full DNF: weights v - 1/2, bias
/// -(v - 1/2).v + lambda. Equivalent with epsilon = lambda for 0 < lambda <= 1/2.
Model compile_universal(const Dnf& full, const PropositionTable& table, double lambda);
/// Universal construction for a single-formula knowledge base over its whole
/// proposition table.
Model compile_universal_kb(const KnowledgeBase& kb, const CompileOptions& opts);

/// Appends `count` unannotated hidden units with parameters drawn uniformly
/// from [-init_scale, init_scale].
Model attach_hidden_units(Model model, std::size_t count, double init_scale, Rng& rng);

}  // namespace rbmlogic
