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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbmlogic/formula.hpp"
#include "rbmlogic/model.hpp"
#include "rbmlogic/rbm.hpp"

namespace rbmlogic {

struct Dataset {
  PropositionTable table;
  std::vector<BitVector> rows;       // each row covers the whole table
  std::vector<std::size_t> targets;  // propositions treated as y

  void validate() const;
  std::vector<std::string> target_names() const;
};

/// CSV with a header of proposition names and 0/1 cells. `targets` names the
/// y columns (may be empty).
Dataset parse_dataset_csv(std::string_view text, std::span<const std::string> targets = {});
Dataset load_dataset_csv(const std::string& path, std::span<const std::string> targets = {});
std::string to_csv(const Dataset& d);
void save_dataset_csv(const Dataset& d, const std::string& path);

/// One preferred model per formula: an implication sets its body literals
/// and head true; any other formula takes its first model in canonical
/// order. Propositions a formula does not mention are 0.
Dataset dataset_from_clauses(const KnowledgeBase& kb, std::span<const std::string> targets = {});

/// Reorders columns (and targets) to `names`; throws if a name is missing.
Dataset align_columns(const Dataset& d, const std::vector<std::string>& names);

/// Columns with indices given in `names` order; throws on unknown names.
std::vector<std::size_t> resolve_names(const PropositionTable& table,
                                       std::span<const std::string> names);

/// Same layout as the Rbm fields.
struct Gradient {
  std::vector<double> weights;
  std::vector<double> visible_bias;
  std::vector<double> hidden_bias;

  static Gradient zeros(const Rbm& m);
  void add(const Gradient& other, double scale = 1.0);
  void scale(double factor);
  double max_abs() const;
};

struct DiscriminativeResult {
  Gradient gradient;
  double loss = 0.0;  // -log p(y_true | x)
};

constexpr std::size_t kTargetLimit = 16;

/// Exact gradient of -log p(y | x) where y = row[targets] and x is the rest
/// of the row.
DiscriminativeResult discriminative_gradient(const Rbm& m, std::span<const std::uint8_t> row,
                                             std::span<const std::size_t> targets);

struct CdResult {
  Gradient gradient;           // estimate of d(-log p(x)) / d(theta), batch mean
  double reconstruction = 0.0;  // mean squared error of the one-step reconstruction
};

CdResult cd_gradient(const Rbm& m, std::span<const BitVector> batch, std::size_t cd_k, Rng& rng);

struct TrainConfig {
  double alpha = 0.0;  // generative weight
  double beta = 1.0;   // discriminative weight
  double learning_rate = 0.1;
  double momentum = 0.0;
  std::size_t epochs = 100;
  std::size_t batch_size = 0;  // 0 = full batch
  std::size_t cd_k = 1;
  std::uint64_t seed = 0;
  /// Annotated units keep their clause sign pattern; only their confidence
  /// moves. Visible biases stay fixed.
  bool freeze_structure = false;

  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;
  double discriminative_nll = 0.0;  // mean over rows after the epoch; NaN without targets
  double reconstruction = 0.0;      // mean over batches during the epoch; NaN when alpha = 0
};

struct TrainResult {
  Model model;
  double initial_nll = 0.0;
  std::vector<EpochStats> trace;
};

/// Mean exact -log p(y | x) over the dataset.
double mean_discriminative_nll(const Rbm& m, const Dataset& d);

TrainResult train(const Model& model, const Dataset& d, const TrainConfig& cfg);

}  // namespace rbmlogic
