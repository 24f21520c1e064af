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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbmlogic/formula.hpp"
#include "rbmlogic/normal_forms.hpp"
#include "rbmlogic/rbm.hpp"

namespace rbmlogic {

/// Records which conjunctive clause a hidden unit encodes. The unit's
/// parameters are column = confidence * pattern(clause) and
/// bias = confidence * (margin - |clause.pos|).
struct ClauseAnnotation {
  ConjunctiveClause clause;
  double confidence = 1.0;
  double margin = 0.5;
  std::string source;  // originating formula text, if any

  /// +1 / -1 / 0 per visible unit.
  std::vector<double> pattern(std::size_t n_visible) const;
  double base_bias() const { return margin - static_cast<double>(clause.pos.size()); }
};

/// An RBM plus the symbolic metadata needed to read it back as logic.
struct Model {
  Rbm rbm;
  std::vector<std::string> names;  // one per visible unit
  double epsilon = 0.5;
  std::vector<std::optional<ClauseAnnotation>> annotations;  // one per hidden unit

  PropositionTable table() const { return PropositionTable(names); }
  /// True when every hidden unit carries a clause annotation.
  bool fully_annotated() const;
  void validate() const;
};

/// Model file: a single JSON object with fields n_visible, n_hidden, names,
/// W (row-major rows), a, b, e0, tau, epsilon, clause_annotations.
std::string to_json(const Model& model);
Model model_from_json(std::string_view text);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace rbmlogic
