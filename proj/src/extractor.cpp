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

#include "rbmlogic/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

std::vector<ExtractedClause> extract_clauses(const Rbm& m, const PropositionTable& table,
                                             std::span<const double> prune_fractions) {
  if (table.size() != m.n_visible)
    fail(ErrorKind::invalid_argument, "proposition table does not match the visible layer");
  if (prune_fractions.empty()) fail(ErrorKind::invalid_argument, "no prune fractions given");
  for (double f : prune_fractions)
    if (!(f >= 0.0 && f < 1.0)) fail(ErrorKind::invalid_argument, "prune fractions must lie in [0, 1)");

  std::vector<ExtractedClause> out;
  std::vector<double> column(m.n_visible);
  for (std::size_t j = 0; j < m.n_hidden; ++j) {
    double peak = 0.0;
    for (std::size_t i = 0; i < m.n_visible; ++i) {
      column[i] = m.w(i, j);
      peak = std::max(peak, std::abs(column[i]));
    }
    ExtractedClause best;
    best.hidden_index = j;
    best.hidden_bias = m.hidden_bias[j];
    if (peak == 0.0) {
      best.zero_column = true;
      best.clause.confidence = 0.0;
      out.push_back(std::move(best));
      continue;
    }
    bool have = false;
    for (double f : prune_fractions) {
      std::vector<std::size_t> pos, neg;
      double sum = 0.0;
      for (std::size_t i = 0; i < m.n_visible; ++i) {
        const double a = std::abs(column[i]);
        if (column[i] == 0.0 || a < f * peak) continue;
        (column[i] > 0 ? pos : neg).push_back(i);
        sum += a;
      }
      const double c = sum / static_cast<double>(pos.size() + neg.size());
      double dist2 = 0.0;
      std::size_t p = 0, n = 0;
      for (std::size_t i = 0; i < m.n_visible; ++i) {
        double s = 0.0;
        if (p < pos.size() && pos[p] == i) s = 1.0, ++p;
        else if (n < neg.size() && neg[n] == i) s = -1.0, ++n;
        const double r = column[i] - c * s;
        dist2 += r * r;
      }
      const double dist = std::sqrt(dist2);
      if (have && !(dist < best.distance)) continue;
      have = true;
      best.distance = dist;
      best.prune_fraction = f;
      best.clause.clause = ConjunctiveClause::make(std::move(pos), std::move(neg));
      best.clause.confidence = c;
    }
    out.push_back(std::move(best));
  }
  return out;
}

Reliability reliability_ratio(const ConjunctiveClause& clause, const Dataset& d,
                              std::span<const std::size_t> class_indices) {
  auto is_class = [&](std::size_t v) {
    return std::find(class_indices.begin(), class_indices.end(), v) != class_indices.end();
  };
  std::optional<std::pair<std::size_t, std::uint8_t>> class_literal;
  std::size_t class_count = 0;
  for (auto v : clause.pos)
    if (is_class(v)) ++class_count, class_literal = {v, 1};
  for (auto v : clause.neg)
    if (is_class(v)) ++class_count, class_literal = {v, 0};
  if (class_count != 1)
    fail(ErrorKind::precondition, "clause must mention exactly one class literal, found " +
                                      std::to_string(class_count));

  Reliability r;
  for (const auto& row : d.rows) {
    if (row.size() != d.table.size()) fail(ErrorKind::invalid_argument, "row length mismatch");
    bool body = true;
    for (auto v : clause.pos)
      if (!is_class(v) && row[v] != 1) body = false;
    for (auto v : clause.neg)
      if (!is_class(v) && row[v] != 0) body = false;
    if (!body) continue;
    if (row[class_literal->first] == class_literal->second) ++r.satisfy;
    else ++r.violate;
  }
  return r;
}

void annotate_reliability(std::vector<ExtractedClause>& clauses, const Dataset& d,
                          std::span<const std::size_t> class_indices) {
  for (auto& ec : clauses) {
    std::size_t count = 0;
    for (auto v : ec.clause.clause.variables())
      count += std::find(class_indices.begin(), class_indices.end(), v) != class_indices.end();
    if (count == 1) ec.reliability = reliability_ratio(ec.clause.clause, d, class_indices);
  }
}

std::vector<ExtractedClause> sorted_by_confidence(std::vector<ExtractedClause> clauses) {
  std::stable_sort(clauses.begin(), clauses.end(), [](const auto& a, const auto& b) {
    return a.clause.confidence > b.clause.confidence;
  });
  return clauses;
}

std::string format_listing(std::span<const ExtractedClause> clauses, const PropositionTable& table) {
  std::string out;
  char buf[64];
  for (const auto& ec : clauses) {
    std::snprintf(buf, sizeof buf, "%.4f: ", ec.clause.confidence);
    out += buf;
    out += to_string(ec.clause.clause, table);
    if (ec.reliability) {
      out += " [rr=" + std::to_string(ec.reliability->satisfy) + "/" +
             std::to_string(ec.reliability->violate) + "]";
    }
    if (ec.zero_column) out += " [zero column]";
    out += '\n';
  }
  return out;
}

}  // namespace rbmlogic
