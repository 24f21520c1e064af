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

#include "rbmlogic/reasoner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

QueryMode parse_query_mode(const std::string& text) {
  if (text == "gibbs") return QueryMode::gibbs;
  if (text == "deterministic") return QueryMode::deterministic;
  if (text == "conditional") return QueryMode::conditional;
  if (text == "exact") return QueryMode::exact;
  fail(ErrorKind::invalid_argument, "unknown query mode '" + text + "'");
}

const char* to_string(QueryMode mode) {
  switch (mode) {
    case QueryMode::gibbs: return "gibbs";
    case QueryMode::deterministic: return "deterministic";
    case QueryMode::conditional: return "conditional";
    case QueryMode::exact: return "exact";
  }
  return "?";
}

namespace {

void check_evidence(const Rbm& m, const Assignment& evidence) {
  if (evidence.size() != m.n_visible)
    fail(ErrorKind::invalid_argument, "evidence does not cover the visible layer");
}

void require_within(std::size_t count, std::size_t limit, const char* what) {
  if (count > limit)
    fail(ErrorKind::limit_exceeded, std::string(what) + ": " + std::to_string(count) +
                                        " free variables exceed the limit of " +
                                        std::to_string(limit));
}

// Visits every completion of `evidence`.
template <typename Fn>
void for_each_completion(const Assignment& evidence, Fn fn) {
  const auto free = evidence.unassigned_indices();
  BitVector x = evidence.bits();
  const std::uint64_t count = std::uint64_t{1} << free.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = (mask >> k) & 1U;
    fn(static_cast<const BitVector&>(x));
  }
}

BitVector random_start(const Assignment& evidence, Rng& rng) {
  BitVector x(evidence.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = evidence.assigned(i) ? evidence.value(i) : (uniform01(rng) < 0.5 ? 1 : 0);
  return x;
}

// Keeps the lowest energy; equal energies prefer the lexicographically
// smaller state so aggregation does not depend on visiting order.
struct BestState {
  BitVector state;
  double energy = std::numeric_limits<double>::infinity();
  bool offer(const BitVector& x, double e) {
    if (e < energy || (e == energy && x < state)) {
      state = x;
      energy = e;
      return true;
    }
    return false;
  }
};

}  // namespace

MaxSatResult brute_force_maxsat(const KnowledgeBase& kb, const Assignment& evidence,
                                std::size_t limit) {
  if (evidence.size() != kb.table.size())
    fail(ErrorKind::invalid_argument, "evidence does not cover the knowledge base");
  require_within(evidence.unassigned_indices().size(), limit, "brute-force MaxSAT");
  MaxSatResult result;
  result.score = -std::numeric_limits<double>::infinity();
  for_each_completion(evidence, [&](const BitVector& x) {
    const double s = weighted_sat(kb, Assignment::from_bits(x));
    const double tol = 1e-9 * std::max(1.0, std::abs(result.score));
    if (result.best.empty() || s > result.score + tol) {
      result.score = s;
      result.best.assign(1, x);
    } else if (std::abs(s - result.score) <= tol) {
      result.best.push_back(x);
    }
  });
  std::sort(result.best.begin(), result.best.end());
  return result;
}

double anneal_temperature(const GibbsConfig& cfg, std::size_t step) {
  if (cfg.steps <= 1) return cfg.tau_end;
  const double t = static_cast<double>(step) / static_cast<double>(cfg.steps - 1);
  return cfg.tau_start * std::pow(cfg.tau_end / cfg.tau_start, t);
}

InferenceReport infer_gibbs(const Rbm& m, const Assignment& evidence, const GibbsConfig& cfg) {
  check_evidence(m, evidence);
  if (!(cfg.tau_start > 0) || !(cfg.tau_end > 0))
    fail(ErrorKind::invalid_argument, "temperature schedule must stay positive");
  InferenceReport report;
  report.steps = cfg.steps;
  report.restarts = std::max<std::size_t>(cfg.restarts, 1);
  BestState best;
  for (std::size_t r = 0; r < report.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, r);
    BitVector x = random_start(evidence, rng);
    std::vector<double> trace{energy_rank(m, x)};
    if (best.offer(x, trace.back())) report.best_restart = r;
    for (std::size_t s = 0; s < cfg.steps; ++s) {
      x = gibbs_step(m, evidence, x, rng, anneal_temperature(cfg, s));
      trace.push_back(energy_rank(m, x));
      if (best.offer(x, trace.back())) report.best_restart = r;
    }
    report.traces.push_back(std::move(trace));
  }
  report.assignment = best.state;
  report.energy_rank = best.energy;
  return report;
}

DescentRun descend(const Rbm& m, const Assignment& clamp, BitVector start, std::size_t max_sweeps) {
  check_evidence(m, clamp);
  DescentRun run;
  run.state = std::move(start);
  run.trace.push_back(energy_rank(m, run.state));
  Rng unused(0);  // tau == 0 never draws
  for (std::size_t s = 0; s < max_sweeps; ++s) {
    BitVector next = gibbs_step(m, clamp, run.state, unused, 0.0);
    ++run.sweeps;
    std::size_t flips = 0;
    for (std::size_t i = 0; i < next.size(); ++i) flips += next[i] != run.state[i];
    run.trace.push_back(energy_rank(m, next));
    run.state = std::move(next);
    run.changes += flips;
    if (flips == 0) {
      run.converged = true;
      break;
    }
  }
  return run;
}

InferenceReport infer_deterministic(const Rbm& m, const Assignment& evidence,
                                    const DescentConfig& cfg) {
  check_evidence(m, evidence);
  InferenceReport report;
  report.restarts = std::max<std::size_t>(cfg.restarts, 1);
  BestState best;
  for (std::size_t r = 0; r < report.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, r);
    DescentRun run = descend(m, evidence, random_start(evidence, rng), cfg.sweeps);
    report.steps = std::max(report.steps, run.sweeps);
    if (best.offer(run.state, run.trace.back())) report.best_restart = r;
    report.traces.push_back(std::move(run.trace));
  }
  report.assignment = best.state;
  report.energy_rank = best.energy;
  return report;
}

InferenceReport infer_exact(const Rbm& m, const Assignment& evidence, std::size_t limit) {
  check_evidence(m, evidence);
  require_within(evidence.unassigned_indices().size(), limit, "exact inference");
  BestState best;
  for_each_completion(evidence, [&](const BitVector& x) { best.offer(x, energy_rank(m, x)); });
  InferenceReport report;
  report.assignment = best.state;
  report.energy_rank = best.energy;
  report.restarts = 1;
  return report;
}

ConditionalResult infer_conditional(const Rbm& m, const Assignment& evidence,
                                    std::span<const std::size_t> targets, std::size_t limit) {
  check_evidence(m, evidence);
  require_within(targets.size(), limit, "conditional inference");
  std::vector<bool> is_target(m.n_visible, false);
  for (auto t : targets) {
    if (t >= m.n_visible) fail(ErrorKind::invalid_argument, "target index out of range");
    if (is_target[t]) fail(ErrorKind::invalid_argument, "target listed twice");
    if (evidence.assigned(t)) fail(ErrorKind::precondition, "target is also evidence");
    is_target[t] = true;
  }
  for (std::size_t i = 0; i < m.n_visible; ++i)
    if (!is_target[i] && !evidence.assigned(i))
      fail(ErrorKind::precondition, "evidence and targets must cover every visible unit");
  if (!(m.temperature > 0)) fail(ErrorKind::precondition, "conditional inference needs tau > 0");

  ConditionalResult out;
  out.targets.assign(targets.begin(), targets.end());
  BitVector x = evidence.bits();
  const std::uint64_t count = std::uint64_t{1} << targets.size();
  std::vector<double> logits;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    BitVector config(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
      config[k] = (mask >> k) & 1U;
      x[targets[k]] = config[k];
    }
    logits.push_back(-free_energy(m, x) / m.temperature);
    out.configs.push_back(std::move(config));
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - peak);
  out.marginals.assign(targets.size(), 0.0);
  for (std::size_t c = 0; c < logits.size(); ++c) {
    const double p = std::exp(logits[c] - peak) / z;
    out.probabilities.push_back(p);
    for (std::size_t k = 0; k < targets.size(); ++k)
      if (out.configs[c][k]) out.marginals[k] += p;
    if (p > out.probabilities[out.map_index]) out.map_index = c;
  }
  out.decision.resize(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) out.decision[k] = out.marginals[k] >= 0.5;
  return out;
}

EquivalenceReport verify_equivalence(const Model& model, const KnowledgeBase& kb, double epsilon,
                                     std::size_t limit) {
  if (!(epsilon > 0)) fail(ErrorKind::invalid_argument, "epsilon must be positive");
  const Rbm& m = model.rbm;
  require_within(m.n_visible, limit, "equivalence check");
  const PropositionTable table(model.names);
  std::vector<std::size_t> kb_to_visible(kb.table.size());
  for (std::size_t p = 0; p < kb.table.size(); ++p) {
    auto idx = table.find(kb.table.name(p));
    if (!idx) fail(ErrorKind::invalid_argument, "model has no visible unit for '" + kb.table.name(p) + "'");
    kb_to_visible[p] = *idx;
  }

  EquivalenceReport report;
  report.max_deviation = -1.0;
  const std::uint64_t count = std::uint64_t{1} << m.n_visible;
  BitVector x(m.n_visible);
  Assignment kb_assignment(kb.table.size());
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    // Row order follows the binary counting of a truth table (first
    // proposition is the most significant bit).
    for (std::size_t i = 0; i < m.n_visible; ++i) x[i] = (mask >> (m.n_visible - 1 - i)) & 1U;
    for (std::size_t p = 0; p < kb.table.size(); ++p) kb_assignment.set(p, x[kb_to_visible[p]]);
    EquivalenceRow row{x, weighted_sat(kb, kb_assignment), energy_rank(m, x)};
    const double dev = std::abs(row.weighted_sat + row.energy_rank / epsilon);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.witness = x;
    }
    report.rows.push_back(std::move(row));
  }
  if (report.max_deviation < 0) report.max_deviation = 0;
  return report;
}

}  // namespace rbmlogic
