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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbmlogic/formula.hpp"
#include "rbmlogic/model.hpp"
#include "rbmlogic/rbm.hpp"

namespace rbmlogic {

enum class QueryMode { gibbs, deterministic, conditional, exact };
QueryMode parse_query_mode(const std::string& text);
const char* to_string(QueryMode mode);

constexpr std::size_t kMaxSatLimit = 24;
constexpr std::size_t kConditionalLimit = 16;
constexpr std::size_t kEquivalenceLimit = 16;

struct MaxSatResult {
  std::vector<BitVector> best;  // every maximiser, lexicographic order
  double score = 0.0;
};

/// Exhaustive argmax of weighted_sat over completions of `evidence`.
MaxSatResult brute_force_maxsat(const KnowledgeBase& kb, const Assignment& evidence,
                                std::size_t limit = kMaxSatLimit);

struct GibbsConfig {
  std::size_t steps = 200;
  std::size_t restarts = 10;
  double tau_start = 1.0;
  double tau_end = 0.05;  // geometric anneal from tau_start to tau_end
  std::uint64_t seed = 0;
};

/// Temperature used at `step` (0-based) of a chain.
double anneal_temperature(const GibbsConfig& cfg, std::size_t step);

struct DescentConfig {
  std::size_t sweeps = 100;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

struct InferenceReport {
  BitVector assignment;
  double energy_rank = 0.0;
  std::size_t steps = 0;
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  /// energy_rank of the visible state after every step/sweep, per restart;
  /// entry 0 is the initial state.
  std::vector<std::vector<double>> traces;
};

/// Clamped annealed Gibbs sampling; returns the lowest-energy visible state
/// seen over all restarts. Ties go to the lexicographically smallest state.
InferenceReport infer_gibbs(const Rbm& m, const Assignment& evidence, const GibbsConfig& cfg);

struct DescentRun {
  BitVector state;
  std::vector<double> trace;
  std::size_t sweeps = 0;
  std::size_t changes = 0;  // visible flips over the whole run
  bool converged = false;   // reached a fixed point
};

/// Zero-temperature alternating minimisation from `start`.
DescentRun descend(const Rbm& m, const Assignment& clamp, BitVector start, std::size_t max_sweeps);

InferenceReport infer_deterministic(const Rbm& m, const Assignment& evidence,
                                    const DescentConfig& cfg);

/// Exhaustive argmin of energy_rank over completions of `evidence`.
InferenceReport infer_exact(const Rbm& m, const Assignment& evidence,
                            std::size_t limit = kMaxSatLimit);

struct ConditionalResult {
  std::vector<std::size_t> targets;
  std::vector<BitVector> configs;     // target values, bit k of config index = targets[k]
  std::vector<double> probabilities;  // p(config | evidence)
  std::vector<double> marginals;      // p(target_k = 1 | evidence)
  BitVector decision;                 // 1 iff marginal >= 0.5
  std::size_t map_index = 0;          // most probable config
};

/// Exact p(targets | evidence) from free energies; evidence and targets must
/// partition the visible layer.
ConditionalResult infer_conditional(const Rbm& m, const Assignment& evidence,
                                    std::span<const std::size_t> targets,
                                    std::size_t limit = kConditionalLimit);

struct EquivalenceRow {
  BitVector x;
  double weighted_sat = 0.0;
  double energy_rank = 0.0;
};

struct EquivalenceReport {
  double max_deviation = 0.0;  // max |weighted_sat + energy_rank / epsilon|
  BitVector witness;
  std::vector<EquivalenceRow> rows;
};

/// Enumerates every visible assignment and compares the knowledge base's
/// weighted satisfiability with the scaled, negated energy rank. Knowledge
/// base propositions are matched to visible units by name.
EquivalenceReport verify_equivalence(const Model& model, const KnowledgeBase& kb, double epsilon,
                                     std::size_t limit = kEquivalenceLimit);

}  // namespace rbmlogic
