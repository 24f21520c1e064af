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

#include "rbmlogic/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

void CompileOptions::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    fail(ErrorKind::invalid_argument, "epsilon must lie strictly between 0 and 1");
}

const char* to_string(SdnfRoute route) {
  switch (route) {
    case SdnfRoute::implication: return "implication";
    case SdnfRoute::syntactic_dnf: return "dnf";
    case SdnfRoute::full_dnf: return "full_dnf";
  }
  return "?";
}

Dnf formula_to_sdnf(const Formula& f, const CompileOptions& opts, SdnfRoute* route) {
  if (auto shape = as_implication(f)) {
    if (route) *route = SdnfRoute::implication;
    return implication_to_sdnf(shape->body_pos, shape->body_neg, shape->head, opts.elimination,
                               shape->negated_head);
  }
  if (auto dnf = as_syntactic_dnf(f)) {
    if (route) *route = SdnfRoute::syntactic_dnf;
    return dnf_to_sdnf(*dnf, opts.fdnf_limit);
  }
  if (route) *route = SdnfRoute::full_dnf;
  return to_full_dnf(f, opts.fdnf_limit);
}

std::vector<WeightedClause> merge_clauses(std::vector<WeightedClause> clauses, bool subsumption) {
  std::map<ConjunctiveClause, WeightedClause> unique;
  for (auto& wc : clauses) {
    auto [it, inserted] = unique.try_emplace(wc.clause, wc);
    if (inserted) continue;
    it->second.confidence += wc.confidence;
    if (!wc.source.empty() && it->second.source.find(wc.source) == std::string::npos)
      it->second.source += (it->second.source.empty() ? "" : "; ") + wc.source;
  }
  std::vector<WeightedClause> out;
  out.reserve(unique.size());
  for (auto& [_, wc] : unique) out.push_back(std::move(wc));

  if (subsumption) {
    // Most specific clauses first so chains collapse onto the most general one.
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return out[a].clause.size() > out[b].clause.size();
    });
    std::vector<bool> removed(out.size(), false);
    for (std::size_t i : order) {
      std::optional<std::size_t> target;
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (j == i || removed[j]) continue;
        if (out[j].clause.size() >= out[i].clause.size()) continue;
        if (!out[i].clause.contains(out[j].clause)) continue;
        if (!target || out[j].clause.size() < out[*target].clause.size()) target = j;
      }
      if (!target) continue;
      out[*target].confidence += out[i].confidence;
      removed[i] = true;
    }
    std::vector<WeightedClause> kept;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!removed[i]) kept.push_back(std::move(out[i]));
    out = std::move(kept);
  }
  return out;
}

Model compile_clauses(const ClauseBase& base, const CompileOptions& opts) {
  opts.validate();
  const std::size_t n = base.table.size();
  Model model;
  model.rbm = Rbm(n, 0);
  model.names = base.table.names();
  model.epsilon = opts.epsilon;
  const double eps = opts.epsilon;

  for (const auto& wc : base.clauses) {
    const double c = wc.confidence;
    if (c < 0 || !std::isfinite(c))
      fail(ErrorKind::precondition, "clause confidence must be finite and non-negative");
    if (c == 0) continue;
    for (auto v : wc.clause.variables())
      if (v >= n) fail(ErrorKind::invalid_argument, "clause refers to an unknown proposition");

    if (wc.clause.empty()) {
      model.rbm.offset -= c * eps;
      continue;
    }
    if (opts.fold_unit_clauses && wc.clause.size() == 1) {
      // -c*eps*x for a positive literal, -c*eps*(1 - x) for a negative one.
      if (!wc.clause.pos.empty()) {
        model.rbm.visible_bias[wc.clause.pos[0]] += c * eps;
      } else {
        model.rbm.offset -= c * eps;
        model.rbm.visible_bias[wc.clause.neg[0]] -= c * eps;
      }
      continue;
    }

    ClauseAnnotation note{wc.clause, c, eps, wc.source};
    auto column = note.pattern(n);
    for (double& w : column) w *= c;
    model.rbm.add_hidden(column, c * note.base_bias());
    model.annotations.push_back(std::move(note));
  }
  return model;
}

Model compile_sdnf(const Dnf& d, const PropositionTable& table, const CompileOptions& opts) {
  if (!d.strict || !has_exclusivity_certificate(d))
    fail(ErrorKind::precondition, "compile_sdnf requires a strict DNF");
  ClauseBase base{table, {}};
  for (const auto& c : d.clauses) base.clauses.push_back({c, 1.0, ""});
  CompileOptions unfolded = opts;
  unfolded.fold_unit_clauses = false;
  return compile_clauses(base, unfolded);
}

Model compile_implication(std::span<const std::size_t> body_pos,
                          std::span<const std::size_t> body_neg, std::size_t head,
                          const PropositionTable& table, const CompileOptions& opts) {
  if (body_pos.empty() && body_neg.empty())
    fail(ErrorKind::precondition, "implication needs at least one body literal");
  const Dnf d = implication_to_sdnf(body_pos, body_neg, head, opts.elimination);
  ClauseBase base{table, {}};
  for (const auto& c : d.clauses) base.clauses.push_back({c, 1.0, ""});
  CompileOptions folded = opts;
  folded.fold_unit_clauses = true;
  return compile_clauses(base, folded);
}

CompiledKb compile_kb(const KnowledgeBase& kb, const CompileOptions& opts) {
  opts.validate();
  CompiledKb out;
  std::vector<WeightedClause> all;
  for (const auto& item : kb.items) {
    if (item.weight < 0)
      fail(ErrorKind::precondition, "negative weight on formula '" + item.text + "'");
    SdnfRoute route{};
    const Dnf d = formula_to_sdnf(item.formula, opts, &route);
    out.formulas.push_back({item.text, item.weight, route, d.clauses.size()});
    for (const auto& c : d.clauses) all.push_back({c, item.weight, item.text});
  }
  out.clause_base.table = kb.table;
  out.clause_base.clauses = merge_clauses(std::move(all), opts.subsumption_merge);
  out.model = compile_clauses(out.clause_base, opts);
  return out;
}

namespace {

void append_scaled_units(Model& model, const Dnf& d, double scale, double eps,
                         const std::string& source) {
  const std::size_t n = model.rbm.n_visible;
  for (const auto& clause : d.clauses) {
    ClauseAnnotation note{clause, scale, eps, source};
    auto column = note.pattern(n);
    for (double& w : column) w *= scale;
    model.rbm.add_hidden(column, scale * note.base_bias());
    model.annotations.push_back(std::move(note));
  }
}

Model empty_model(const PropositionTable& table, double eps) {
  Model model;
  model.rbm = Rbm(table.size(), 0);
  model.names = table.names();
  model.epsilon = eps;
  return model;
}

}  // namespace

Model compile_penalty_horn(std::span<const std::size_t> body_pos, std::size_t head,
                           const PropositionTable& table, double epsilon,
                           const EliminationOrder& order) {
  if (body_pos.empty()) fail(ErrorKind::precondition, "Horn clause needs a non-empty body");
  const Dnf d = implication_to_sdnf(body_pos, {}, head, order);
  Model model = empty_model(table, epsilon);
  append_scaled_units(model, d, 2.0, epsilon, "");
  model.rbm.offset += 1.0;
  return model;
}

Model compile_penalty_kb(const KnowledgeBase& kb, const CompileOptions& opts) {
  opts.validate();
  Model model = empty_model(kb.table, opts.epsilon);
  for (const auto& item : kb.items) {
    if (item.weight < 0)
      fail(ErrorKind::precondition, "negative weight on formula '" + item.text + "'");
    auto shape = as_implication(item.formula);
    if (!shape || !shape->body_neg.empty() || shape->negated_head)
      fail(ErrorKind::precondition, "penalty baseline requires Horn clauses: '" + item.text + "'");
    const Dnf d = implication_to_sdnf(shape->body_pos, {}, shape->head, opts.elimination);
    append_scaled_units(model, d, 2.0 * item.weight, opts.epsilon, item.text);
    model.rbm.offset += item.weight;
  }
  return model;
}

Model compile_universal(const Dnf& full, const PropositionTable& table, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    fail(ErrorKind::invalid_argument, "lambda must be positive");
  for (const auto& c : full.clauses)
    if (c.size() != table.size())
      fail(ErrorKind::precondition, "universal construction requires a full DNF over the table");
  Model model = empty_model(table, lambda);
  // Weights v - 1/2 are the +-1 pattern scaled by 1/2; the bias
  // -(v - 1/2).v + lambda equals 1/2 * (2 lambda - |pos|).
  for (const auto& c : full.clauses) {
    ClauseAnnotation note{c, 0.5, 2.0 * lambda, ""};
    auto column = note.pattern(table.size());
    for (double& w : column) w *= 0.5;
    model.rbm.add_hidden(column, 0.5 * note.base_bias());
    model.annotations.push_back(std::move(note));
  }
  return model;
}

Model compile_universal_kb(const KnowledgeBase& kb, const CompileOptions& opts) {
  opts.validate();
  if (kb.items.size() != 1)
    fail(ErrorKind::precondition, "universal baseline requires a single-formula knowledge base");
  const auto& item = kb.items.front();
  if (item.weight < 0) fail(ErrorKind::precondition, "negative formula weight");
  std::vector<std::size_t> all(kb.table.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Dnf d = to_full_dnf(item.formula, all, opts.fdnf_limit);
  Model model = compile_universal(d, kb.table, opts.epsilon);
  for (std::size_t j = 0; j < model.rbm.n_hidden; ++j) {
    for (std::size_t i = 0; i < model.rbm.n_visible; ++i) model.rbm.w(i, j) *= item.weight;
    model.rbm.hidden_bias[j] *= item.weight;
    model.annotations[j]->confidence *= item.weight;
    model.annotations[j]->source = item.text;
  }
  return model;
}

Model attach_hidden_units(Model model, std::size_t count, double init_scale, Rng& rng) {
  if (init_scale < 0 || !std::isfinite(init_scale))
    fail(ErrorKind::invalid_argument, "init scale must be finite and non-negative");
  const std::size_t n = model.rbm.n_visible;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> column(n);
    for (double& w : column) w = uniform(rng, -init_scale, init_scale);
    const double bias = uniform(rng, -init_scale, init_scale);
    model.rbm.add_hidden(column, bias);
  }
  model.annotations.resize(model.rbm.n_hidden);
  return model;
}

}  // namespace rbmlogic
