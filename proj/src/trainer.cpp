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

#include "rbmlogic/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rbmlogic/error.hpp"
#include "rbmlogic/normal_forms.hpp"

namespace rbmlogic {

void Dataset::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != table.size())
      fail(ErrorKind::invalid_argument, "row " + std::to_string(r + 1) + " has the wrong length");
    for (auto v : rows[r])
      if (v > 1) fail(ErrorKind::invalid_argument, "row " + std::to_string(r + 1) + " is not binary");
  }
  std::vector<bool> seen(table.size(), false);
  for (auto t : targets) {
    if (t >= table.size()) fail(ErrorKind::invalid_argument, "target index out of range");
    if (seen[t]) fail(ErrorKind::invalid_argument, "duplicate target");
    seen[t] = true;
  }
}

std::vector<std::string> Dataset::target_names() const {
  std::vector<std::string> out;
  for (auto t : targets) out.push_back(table.name(t));
  return out;
}

std::vector<std::size_t> resolve_names(const PropositionTable& table,
                                       std::span<const std::string> names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto idx = table.find(n);
    if (!idx) fail(ErrorKind::invalid_argument, "unknown proposition '" + n + "'");
    out.push_back(*idx);
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text, std::span<const std::string> targets) {
  Dataset d;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      for (const auto& name : cells) {
        if (name.empty()) fail(ErrorKind::parse, "empty column name in header");
        if (d.table.find(name)) fail(ErrorKind::parse, "duplicate column '" + name + "'");
        d.table.intern(name);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != d.table.size())
      throw ParseError(line_no, 1, "expected " + std::to_string(d.table.size()) + " cells, found " +
                                       std::to_string(cells.size()));
    BitVector row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == "0") row[c] = 0;
      else if (cells[c] == "1") row[c] = 1;
      else
        throw ParseError(line_no, c + 1, "column '" + d.table.name(c) + "' holds non-binary value '" +
                                             cells[c] + "'");
    }
    d.rows.push_back(std::move(row));
  }
  if (!have_header) fail(ErrorKind::parse, "dataset has no header");
  d.targets = resolve_names(d.table, targets);
  d.validate();
  return d;
}

Dataset load_dataset_csv(const std::string& path, std::span<const std::string> targets) {
  return parse_dataset_csv(read_file(path), targets);
}

std::string to_csv(const Dataset& d) {
  std::string out;
  for (std::size_t i = 0; i < d.table.size(); ++i) {
    if (i) out += ',';
    out += d.table.name(i);
  }
  out += '\n';
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

void save_dataset_csv(const Dataset& d, const std::string& path) { write_file(path, to_csv(d)); }

Dataset dataset_from_clauses(const KnowledgeBase& kb, std::span<const std::string> targets) {
  Dataset d;
  d.table = kb.table;
  for (const auto& item : kb.items) {
    BitVector row(kb.table.size(), 0);
    if (auto shape = as_implication(item.formula)) {
      for (auto p : shape->body_pos) row[p] = 1;
      row[shape->head] = shape->negated_head ? 0 : 1;
    } else {
      const Dnf models = to_full_dnf(item.formula);
      if (models.clauses.empty())
        fail(ErrorKind::precondition, "formula '" + item.text + "' has no model");
      for (auto p : models.clauses.front().pos) row[p] = 1;
    }
    d.rows.push_back(std::move(row));
  }
  d.targets = resolve_names(d.table, targets);
  return d;
}

Gradient Gradient::zeros(const Rbm& m) {
  Gradient g;
  g.weights.assign(m.weights.size(), 0.0);
  g.visible_bias.assign(m.n_visible, 0.0);
  g.hidden_bias.assign(m.n_hidden, 0.0);
  return g;
}

void Gradient::add(const Gradient& o, double s) {
  for (std::size_t k = 0; k < weights.size(); ++k) weights[k] += s * o.weights[k];
  for (std::size_t k = 0; k < visible_bias.size(); ++k) visible_bias[k] += s * o.visible_bias[k];
  for (std::size_t k = 0; k < hidden_bias.size(); ++k) hidden_bias[k] += s * o.hidden_bias[k];
}

void Gradient::scale(double f) {
  for (double& v : weights) v *= f;
  for (double& v : visible_bias) v *= f;
  for (double& v : hidden_bias) v *= f;
}

double Gradient::max_abs() const {
  double m = 0.0;
  for (double v : weights) m = std::max(m, std::abs(v));
  for (double v : visible_bias) m = std::max(m, std::abs(v));
  for (double v : hidden_bias) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Adds s * dF/dtheta at visible state v, given the hidden activations
// sigma_j = logistic(net_j / tau).
void add_free_energy_gradient(Gradient& g, const Rbm& m, std::span<const std::uint8_t> v,
                              std::span<const double> sigma, double s) {
  for (std::size_t i = 0; i < m.n_visible; ++i) {
    if (!v[i]) continue;
    g.visible_bias[i] -= s;
    double* row = g.weights.data() + i * m.n_hidden;
    for (std::size_t j = 0; j < m.n_hidden; ++j) row[j] -= s * sigma[j];
  }
  for (std::size_t j = 0; j < m.n_hidden; ++j) g.hidden_bias[j] -= s * sigma[j];
}

void require_positive_temperature(const Rbm& m) {
  if (!(m.temperature > 0)) fail(ErrorKind::precondition, "training needs tau > 0");
}

BitVector sample(std::span<const double> p, Rng& rng) {
  BitVector out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = uniform01(rng) < p[k] ? 1 : 0;
  return out;
}

}  // namespace

DiscriminativeResult discriminative_gradient(const Rbm& m, std::span<const std::uint8_t> row,
                                             std::span<const std::size_t> targets) {
  require_positive_temperature(m);
  if (row.size() != m.n_visible) fail(ErrorKind::invalid_argument, "row length mismatch");
  if (targets.empty()) fail(ErrorKind::invalid_argument, "discriminative gradient needs targets");
  if (targets.size() > kTargetLimit)
    fail(ErrorKind::limit_exceeded, std::to_string(targets.size()) + " targets exceed the limit of " +
                                        std::to_string(kTargetLimit));
  const double tau = m.temperature;
  const std::uint64_t count = std::uint64_t{1} << targets.size();
  std::uint64_t true_mask = 0;
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (row[targets[k]]) true_mask |= std::uint64_t{1} << k;

  BitVector v(row.begin(), row.end());
  auto set_config = [&](std::uint64_t mask) {
    for (std::size_t k = 0; k < targets.size(); ++k) v[targets[k]] = (mask >> k) & 1U;
  };
  std::vector<double> logits(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    set_config(mask);
    logits[mask] = -free_energy(m, v) / tau;
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - peak);
  const double log_z = peak + std::log(z);

  DiscriminativeResult out;
  out.gradient = Gradient::zeros(m);
  out.loss = log_z - logits[true_mask];
  std::vector<double> sigma(m.n_hidden);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const double p = std::exp(logits[mask] - log_z);
    const double coef = ((mask == true_mask) ? 1.0 : 0.0) - p;
    if (coef == 0.0) continue;
    set_config(mask);
    auto net = hidden_net(m, std::span<const std::uint8_t>(v));
    for (std::size_t j = 0; j < m.n_hidden; ++j) sigma[j] = logistic(net[j] / tau);
    add_free_energy_gradient(out.gradient, m, v, sigma, coef / tau);
  }
  return out;
}

CdResult cd_gradient(const Rbm& m, std::span<const BitVector> batch, std::size_t cd_k, Rng& rng) {
  require_positive_temperature(m);
  if (cd_k < 1) fail(ErrorKind::invalid_argument, "cd_k must be at least 1");
  CdResult out;
  out.gradient = Gradient::zeros(m);
  if (batch.empty()) return out;
  const double tau = m.temperature;
  const double w = 1.0 / (tau * static_cast<double>(batch.size()));
  for (const auto& v0 : batch) {
    if (v0.size() != m.n_visible) fail(ErrorKind::invalid_argument, "row length mismatch");
    const auto ph0 = p_hidden_given_visible(m, v0);
    add_free_energy_gradient(out.gradient, m, v0, ph0, w);
    BitVector h = sample(ph0, rng);
    BitVector v;
    std::vector<double> ph;
    for (std::size_t step = 0; step < cd_k; ++step) {
      const auto pv = p_visible_given_hidden(m, h);
      if (step == 0) {
        double err = 0.0;
        for (std::size_t i = 0; i < pv.size(); ++i) err += (v0[i] - pv[i]) * (v0[i] - pv[i]);
        out.reconstruction += err / static_cast<double>(std::max<std::size_t>(pv.size(), 1));
      }
      v = sample(pv, rng);
      ph = p_hidden_given_visible(m, v);
      if (step + 1 < cd_k) h = sample(ph, rng);
    }
    add_free_energy_gradient(out.gradient, m, v, ph, -w);
  }
  out.reconstruction /= static_cast<double>(batch.size());
  return out;
}

void TrainConfig::validate() const {
  if (!(alpha >= 0) || !(beta >= 0) || !(alpha + beta > 0))
    fail(ErrorKind::invalid_argument, "alpha and beta must be non-negative and not both zero");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate))
    fail(ErrorKind::invalid_argument, "learning rate must be positive");
  if (!(momentum >= 0 && momentum < 1))
    fail(ErrorKind::invalid_argument, "momentum must lie in [0, 1)");
  if (cd_k < 1) fail(ErrorKind::invalid_argument, "cd_k must be at least 1");
}

double mean_discriminative_nll(const Rbm& m, const Dataset& d) {
  if (d.targets.empty() || d.rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (const auto& row : d.rows) total += discriminative_gradient(m, row, d.targets).loss;
  return total / static_cast<double>(d.rows.size());
}

Dataset align_columns(const Dataset& d, const std::vector<std::string>& names) {
  if (d.table.names() == names) return d;
  Dataset out;
  out.table = PropositionTable(names);
  std::vector<std::size_t> source(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto idx = d.table.find(names[i]);
    if (!idx) fail(ErrorKind::invalid_argument, "dataset has no column '" + names[i] + "'");
    source[i] = *idx;
  }
  for (const auto& row : d.rows) {
    BitVector r(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) r[i] = row[source[i]];
    out.rows.push_back(std::move(r));
  }
  for (auto t : d.targets) {
    auto idx = out.table.find(d.table.name(t));
    if (!idx) fail(ErrorKind::invalid_argument, "target '" + d.table.name(t) + "' is not a visible unit");
    out.targets.push_back(*idx);
  }
  return out;
}

namespace {

// Fisher-Yates on top of uniform01 so the permutation does not depend on the
// standard library's distribution implementations.
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

}  // namespace

TrainResult train(const Model& model, const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  model.validate();
  data.validate();
  require_positive_temperature(model.rbm);
  const Dataset d = align_columns(data, model.names);
  if (cfg.beta > 0 && d.targets.empty())
    fail(ErrorKind::invalid_argument, "discriminative training (beta > 0) needs target columns");

  TrainResult result;
  result.model = model;
  Rbm& m = result.model.rbm;
  auto& notes = result.model.annotations;
  const std::size_t nv = m.n_visible;
  const std::size_t nh = m.n_hidden;
  const bool freeze = cfg.freeze_structure;

  Gradient velocity = Gradient::zeros(m);
  std::vector<double> velocity_c(nh, 0.0);
  Rng rng = make_rng(cfg.seed, 0);
  std::vector<std::size_t> order(d.rows.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  const std::size_t batch_size =
      cfg.batch_size == 0 ? std::max<std::size_t>(d.rows.size(), 1) : cfg.batch_size;

  result.initial_nll = mean_discriminative_nll(m, d);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    double recon_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t stop = std::min(order.size(), start + batch_size);
      std::vector<BitVector> batch;
      for (std::size_t k = start; k < stop; ++k) batch.push_back(d.rows[order[k]]);

      Gradient g = Gradient::zeros(m);
      if (cfg.beta > 0) {
        const double s = cfg.beta / static_cast<double>(batch.size());
        for (const auto& row : batch) g.add(discriminative_gradient(m, row, d.targets).gradient, s);
      }
      if (cfg.alpha > 0) {
        CdResult cd = cd_gradient(m, batch, cfg.cd_k, rng);
        g.add(cd.gradient, cfg.alpha);
        recon_sum += cd.reconstruction;
      }
      ++batches;

      for (std::size_t j = 0; j < nh; ++j) {
        const bool annotated = freeze && notes[j].has_value();
        if (annotated) {
          // Parameters are c * pattern and c * base_bias; chain rule onto c.
          ClauseAnnotation& note = *notes[j];
          const auto pattern = note.pattern(nv);
          double dc = note.base_bias() * g.hidden_bias[j];
          for (std::size_t i = 0; i < nv; ++i) dc += pattern[i] * g.weights[i * nh + j];
          velocity_c[j] = cfg.momentum * velocity_c[j] - cfg.learning_rate * dc;
          note.confidence = std::max(0.0, note.confidence + velocity_c[j]);
          for (std::size_t i = 0; i < nv; ++i) m.w(i, j) = note.confidence * pattern[i];
          m.hidden_bias[j] = note.confidence * note.base_bias();
          continue;
        }
        for (std::size_t i = 0; i < nv; ++i) {
          double& vel = velocity.weights[i * nh + j];
          vel = cfg.momentum * vel - cfg.learning_rate * g.weights[i * nh + j];
          m.w(i, j) += vel;
        }
        double& vb = velocity.hidden_bias[j];
        vb = cfg.momentum * vb - cfg.learning_rate * g.hidden_bias[j];
        m.hidden_bias[j] += vb;
      }
      if (!freeze) {
        for (std::size_t i = 0; i < nv; ++i) {
          double& va = velocity.visible_bias[i];
          va = cfg.momentum * va - cfg.learning_rate * g.visible_bias[i];
          m.visible_bias[i] += va;
        }
      }
    }
    if (!freeze) {
      // Full-parameter updates break the clause reading of annotated units.
      for (auto& note : notes) note.reset();
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.discriminative_nll = mean_discriminative_nll(m, d);
    stats.reconstruction = cfg.alpha > 0 && batches > 0 ? recon_sum / static_cast<double>(batches)
                                                         : std::numeric_limits<double>::quiet_NaN();
    result.trace.push_back(stats);
  }
  return result;
}

}  // namespace rbmlogic
