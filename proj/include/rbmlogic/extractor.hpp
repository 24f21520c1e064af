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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbmlogic/compiler.hpp"
#include "rbmlogic/rbm.hpp"
#include "rbmlogic/trainer.hpp"

namespace rbmlogic {

inline constexpr double kDefaultPruneFractions[] = {0.0, 0.25, 0.5, 0.75};

struct Reliability {
  std::size_t satisfy = 0;
  std::size_t violate = 0;

  bool operator==(const Reliability&) const = default;
};

struct ExtractedClause {
  WeightedClause clause;
  std::size_t hidden_index = 0;
  double distance = 0.0;  // ||w_j - c * s||_2 over all visible units
  double prune_fraction = 0.0;
  double hidden_bias = 0.0;  // diagnostics only
  bool zero_column = false;
  std::optional<Reliability> reliability;
};

/// One clause per hidden column, in hidden-unit order. For every prune
/// fraction f the entries with |w| >= f * max|w| are kept; the sign pattern of
/// the kept entries and the mean of their magnitudes form a candidate, and the
/// candidate closest to the column wins (ties: smaller f).
std::vector<ExtractedClause> extract_clauses(
    const Rbm& m, const PropositionTable& table,
    std::span<const double> prune_fractions = kDefaultPruneFractions);

/// Rows where every non-class literal of `clause` holds; of those, rows whose
/// class literal agrees count as satisfying, the rest as violating. The
/// clause must mention exactly one class proposition.
Reliability reliability_ratio(const ConjunctiveClause& clause, const Dataset& d,
                              std::span<const std::size_t> class_indices);

/// Fills `reliability` for every clause that mentions exactly one class
/// proposition; the others are left empty.
void annotate_reliability(std::vector<ExtractedClause>& clauses, const Dataset& d,
                          std::span<const std::size_t> class_indices);

/// Sorted by confidence, descending; ties keep hidden-unit order.
std::vector<ExtractedClause> sorted_by_confidence(std::vector<ExtractedClause> clauses);

/// "c: lit & lit [rr=s/v]" lines, one per clause, in the given order.
std::string format_listing(std::span<const ExtractedClause> clauses, const PropositionTable& table);

}  // namespace rbmlogic
