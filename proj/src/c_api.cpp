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

#include "rbmlogic/rbmlogic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <initializer_list>
#include <new>
#include <optional>
#include <string>

#include <json.hpp>

#include "rbmlogic/compiler.hpp"
#include "rbmlogic/error.hpp"
#include "rbmlogic/extractor.hpp"
#include "rbmlogic/ingest.hpp"
#include "rbmlogic/reasoner.hpp"
#include "rbmlogic/trainer.hpp"

struct rbml_kb {
  rbmlogic::KnowledgeBase kb;
};
struct rbml_model {
  rbmlogic::Model model;
};
struct rbml_dataset {
  rbmlogic::Dataset data;
};

namespace {

using namespace rbmlogic;
using ojson = nlohmann::ordered_json;

thread_local std::string g_last_error;

// Raised for argument problems detected in this layer.
struct ApiError {
  rbml_status status;
  std::string message;
};

[[noreturn]] void api_fail(rbml_status status, std::string message) {
  throw ApiError{status, std::move(message)};
}

rbml_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return RBML_ERR_PARSE;
    case ErrorKind::invalid_argument: return RBML_ERR_INVALID_ARGUMENT;
    case ErrorKind::precondition: return RBML_ERR_PRECONDITION;
    case ErrorKind::limit_exceeded: return RBML_ERR_LIMIT;
    case ErrorKind::io: return RBML_ERR_IO;
  }
  return RBML_ERR_INTERNAL;
}

template <typename Fn>
rbml_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RBML_OK;
  } catch (const ApiError& e) {
    g_last_error = e.message;
    return e.status;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return RBML_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RBML_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RBML_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return RBML_ERR_INTERNAL;
  }
}

template <typename T>
void require(const T* p, const char* what) {
  if (!p) api_fail(RBML_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

// Parses an options object; NULL or "" means {}. Unknown keys are rejected so
// typos do not silently fall back to defaults.
nlohmann::json parse_options(const char* text, std::initializer_list<const char*> allowed,
                             const char* what) {
  if (!text || !*text) return nlohmann::json::object();
  auto j = nlohmann::json::parse(text);
  if (!j.is_object()) api_fail(RBML_ERR_PARSE, std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) api_fail(RBML_ERR_INVALID_ARGUMENT, std::string(what) + ": unknown key '" + key + "'");
  }
  return j;
}

std::vector<std::string> parse_name_list(const char* text) {
  if (!text || !*text) return {};
  return nlohmann::json::parse(text).get<std::vector<std::string>>();
}

std::string bits_string(const BitVector& x) {
  std::string s;
  for (auto b : x) s += b ? '1' : '0';
  return s;
}

ojson assignment_json(const BitVector& x, const std::vector<std::string>& names) {
  ojson j = ojson::object();
  for (std::size_t i = 0; i < x.size(); ++i) j[names[i]] = static_cast<int>(x[i]);
  return j;
}

ojson clause_json(const ConjunctiveClause& c, const PropositionTable& t) {
  ojson pos = ojson::array(), neg = ojson::array();
  for (auto i : c.pos) pos.push_back(t.name(i));
  for (auto i : c.neg) neg.push_back(t.name(i));
  return ojson{{"clause", to_string(c, t)}, {"pos", pos}, {"neg", neg}};
}

// weighted_sat of a visible state, from the knowledge base when one is given
// and otherwise from the energy of a fully clause-annotated network.
std::optional<std::pair<double, const char*>> weighted_sat_of(const Model& model, const BitVector& x,
                                                              const KnowledgeBase* kb) {
  if (kb) {
    Assignment a(kb->table.size());
    const auto table = model.table();
    for (std::size_t p = 0; p < kb->table.size(); ++p) {
      auto idx = table.find(kb->table.name(p));
      if (!idx)
        api_fail(RBML_ERR_INVALID_ARGUMENT, "model has no visible unit for '" + kb->table.name(p) + "'");
      a.set(p, x[*idx]);
    }
    return std::pair{weighted_sat(*kb, a), "kb"};
  }
  if (model.fully_annotated()) return std::pair{-energy_rank(model.rbm, x) / model.epsilon, "energy"};
  return std::nullopt;
}

}  // namespace

extern "C" {

const char* rbml_version(void) { return "0.1.0"; }

const char* rbml_status_name(rbml_status status) {
  switch (status) {
    case RBML_OK: return "ok";
    case RBML_ERR_PARSE: return "parse error";
    case RBML_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RBML_ERR_PRECONDITION: return "precondition violated";
    case RBML_ERR_LIMIT: return "limit exceeded";
    case RBML_ERR_IO: return "i/o error";
    case RBML_ERR_VERIFY: return "verification failed";
    case RBML_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rbml_last_error(void) { return g_last_error.c_str(); }

void rbml_string_free(char* s) { std::free(s); }

rbml_status rbml_kb_parse(const char* text, rbml_kb** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new rbml_kb{parse_knowledge_base(text)};
  });
}

rbml_status rbml_kb_load(const char* path, rbml_kb** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rbml_kb{load_knowledge_base(path)};
  });
}

size_t rbml_kb_formula_count(const rbml_kb* kb) { return kb ? kb->kb.items.size() : 0; }
size_t rbml_kb_proposition_count(const rbml_kb* kb) { return kb ? kb->kb.table.size() : 0; }
void rbml_kb_free(rbml_kb* kb) { delete kb; }

rbml_status rbml_compile(const rbml_kb* kb, const char* options_json, rbml_model** out,
                         char** report) {
  return guarded([&] {
    require(out, "out");
    const auto opt = parse_options(options_json,
                                   {"epsilon", "baseline", "names", "extra_hidden", "init_scale", "seed",
                                    "fold_unit_clauses", "subsumption_merge", "elimination", "tau"},
                                   "compile options");
    KnowledgeBase base = kb ? kb->kb : KnowledgeBase{};
    for (const auto& name : opt.value("names", std::vector<std::string>{})) base.table.intern(name);
    if (base.table.size() == 0) api_fail(RBML_ERR_INVALID_ARGUMENT, "nothing to compile: no propositions");

    CompileOptions co;
    co.epsilon = opt.value("epsilon", 0.5);
    co.fold_unit_clauses = opt.value("fold_unit_clauses", false);
    co.subsumption_merge = opt.value("subsumption_merge", false);
    const std::string elim = opt.value("elimination", std::string("descending"));
    if (elim == "descending") co.elimination.policy = EliminationOrder::Policy::descending_index;
    else if (elim == "ascending") co.elimination.policy = EliminationOrder::Policy::ascending_index;
    else api_fail(RBML_ERR_INVALID_ARGUMENT, "unknown elimination order '" + elim + "'");

    const std::string baseline = opt.value("baseline", std::string("sdnf"));
    ojson rep;
    rep["baseline"] = baseline;
    rep["formulas"] = ojson::array();
    Model model;
    if (baseline == "sdnf") {
      CompiledKb ck = compile_kb(base, co);
      model = std::move(ck.model);
      for (const auto& f : ck.formulas)
        rep["formulas"].push_back({{"formula", f.text}, {"weight", f.weight},
                                   {"route", to_string(f.route)}, {"clauses", f.clause_count}});
      rep["merged_clauses"] = ck.clause_base.clauses.size();
    } else if (baseline == "penalty") {
      model = compile_penalty_kb(base, co);
      for (const auto& item : base.items) {
        const auto shape = as_implication(item.formula);
        rep["formulas"].push_back({{"formula", item.text}, {"weight", item.weight},
                                   {"route", "horn_penalty"}, {"clauses", shape->body_pos.size() + 1}});
      }
    } else if (baseline == "universal") {
      model = compile_universal_kb(base, co);
      rep["formulas"].push_back({{"formula", base.items.front().text},
                                 {"weight", base.items.front().weight},
                                 {"route", "universal"},
                                 {"clauses", model.rbm.n_hidden}});
    } else {
      api_fail(RBML_ERR_INVALID_ARGUMENT, "unknown baseline '" + baseline + "'");
    }

    const auto extra = opt.value("extra_hidden", std::size_t{0});
    if (extra > 0) {
      Rng rng = make_rng(opt.value("seed", std::uint64_t{0}), 0);
      model = attach_hidden_units(std::move(model), extra, opt.value("init_scale", 0.1), rng);
    }
    model.rbm.temperature = opt.value("tau", 1.0);
    model.validate();

    rep["visible_units"] = model.rbm.n_visible;
    rep["hidden_units"] = model.rbm.n_hidden;
    rep["extra_hidden"] = extra;
    emit(report, rep.dump(2) + "\n");
    *out = new rbml_model{std::move(model)};
  });
}

rbml_status rbml_model_load(const char* path, rbml_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rbml_model{load_model(path)};
  });
}

rbml_status rbml_model_from_json(const char* text, rbml_model** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new rbml_model{model_from_json(text)};
  });
}

rbml_status rbml_model_save(const rbml_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    save_model(model->model, path);
  });
}

rbml_status rbml_model_to_json(const rbml_model* model, char** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = dup_string(to_json(model->model));
  });
}

size_t rbml_model_visible_count(const rbml_model* model) { return model ? model->model.rbm.n_visible : 0; }
size_t rbml_model_hidden_count(const rbml_model* model) { return model ? model->model.rbm.n_hidden : 0; }

rbml_status rbml_model_energy_rank(const rbml_model* model, const uint8_t* x, size_t n, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    if (n != model->model.rbm.n_visible) api_fail(RBML_ERR_INVALID_ARGUMENT, "state length mismatch");
    if (n > 0) require(x, "x");
    BitVector v(x, x + n);
    for (auto b : v)
      if (b > 1) api_fail(RBML_ERR_INVALID_ARGUMENT, "state must be binary");
    *out = energy_rank(model->model.rbm, v);
  });
}

void rbml_model_free(rbml_model* model) { delete model; }

rbml_status rbml_reason(const rbml_model* model, const char* query_json, const rbml_kb* kb,
                        char** report) {
  return guarded([&] {
    require(model, "model");
    require(report, "report");
    const auto q = parse_options(query_json,
                                 {"evidence", "targets", "mode", "steps", "restarts", "sweeps", "seed",
                                  "tau_start", "tau_end"},
                                 "query");
    const Model& m = model->model;
    const auto table = m.table();
    Assignment evidence(m.rbm.n_visible);
    if (q.contains("evidence")) {
      for (const auto& [name, value] : q.at("evidence").items()) {
        auto idx = table.find(name);
        if (!idx) api_fail(RBML_ERR_INVALID_ARGUMENT, "evidence names unknown proposition '" + name + "'");
        bool v = value.is_boolean() ? value.get<bool>() : value.get<int>() != 0;
        if (!value.is_boolean() && value.get<int>() != 0 && value.get<int>() != 1)
          api_fail(RBML_ERR_INVALID_ARGUMENT, "evidence value for '" + name + "' must be 0/1 or a boolean");
        evidence.set(*idx, v);
      }
    }
    const QueryMode mode = parse_query_mode(q.value("mode", std::string("gibbs")));
    const std::uint64_t seed = q.value("seed", std::uint64_t{0});
    const KnowledgeBase* kbp = kb ? &kb->kb : nullptr;

    ojson rep;
    rep["mode"] = to_string(mode);
    rep["evidence"] = ojson::object();
    for (auto i : evidence.assigned_indices()) rep["evidence"][m.names[i]] = evidence.value(i) ? 1 : 0;

    if (mode == QueryMode::conditional) {
      std::vector<std::size_t> targets;
      if (q.contains("targets")) {
        const auto names = q.at("targets").get<std::vector<std::string>>();
        targets = resolve_names(table, names);
      } else {
        targets = evidence.unassigned_indices();
      }
      const auto r = infer_conditional(m.rbm, evidence, targets);
      rep["tau"] = m.rbm.temperature;
      rep["targets"] = ojson::array();
      for (auto t : r.targets) rep["targets"].push_back(m.names[t]);
      rep["configurations"] = ojson::array();
      for (std::size_t c = 0; c < r.configs.size(); ++c) {
        ojson values = ojson::object();
        for (std::size_t k = 0; k < r.targets.size(); ++k) values[m.names[r.targets[k]]] = static_cast<int>(r.configs[c][k]);
        rep["configurations"].push_back({{"values", values}, {"p", r.probabilities[c]}});
      }
      rep["marginals"] = ojson::object();
      rep["decision"] = ojson::object();
      for (std::size_t k = 0; k < r.targets.size(); ++k) {
        rep["marginals"][m.names[r.targets[k]]] = r.marginals[k];
        rep["decision"][m.names[r.targets[k]]] = static_cast<int>(r.decision[k]);
      }
      BitVector x = evidence.bits();
      for (std::size_t k = 0; k < r.targets.size(); ++k) x[r.targets[k]] = r.decision[k];
      rep["assignment"] = assignment_json(x, m.names);
      rep["energy_rank"] = energy_rank(m.rbm, x);
      if (auto ws = weighted_sat_of(m, x, kbp)) {
        rep["weighted_sat"] = ws->first;
        rep["weighted_sat_source"] = ws->second;
      }
      *report = dup_string(rep.dump(2) + "\n");
      return;
    }

    InferenceReport r;
    if (mode == QueryMode::gibbs) {
      GibbsConfig cfg;
      cfg.steps = q.value("steps", cfg.steps);
      cfg.restarts = q.value("restarts", cfg.restarts);
      cfg.tau_start = q.value("tau_start", cfg.tau_start);
      cfg.tau_end = q.value("tau_end", cfg.tau_end);
      cfg.seed = seed;
      r = infer_gibbs(m.rbm, evidence, cfg);
    } else if (mode == QueryMode::deterministic) {
      DescentConfig cfg;
      cfg.sweeps = q.value("sweeps", cfg.sweeps);
      cfg.restarts = q.value("restarts", cfg.restarts);
      cfg.seed = seed;
      r = infer_deterministic(m.rbm, evidence, cfg);
    } else {
      r = infer_exact(m.rbm, evidence);
    }
    rep["assignment"] = assignment_json(r.assignment, m.names);
    rep["energy_rank"] = r.energy_rank;
    if (auto ws = weighted_sat_of(m, r.assignment, kbp)) {
      rep["weighted_sat"] = ws->first;
      rep["weighted_sat_source"] = ws->second;
    }
    rep["steps"] = r.steps;
    rep["restarts"] = r.restarts;
    rep["best_restart"] = r.best_restart;
    if (!r.traces.empty()) {
      ojson best = ojson::array();
      for (const auto& t : r.traces) best.push_back(*std::min_element(t.begin(), t.end()));
      rep["restart_best_energy"] = best;
      rep["energy_trace"] = r.traces[r.best_restart];
    }
    *report = dup_string(rep.dump(2) + "\n");
  });
}

rbml_status rbml_verify(const rbml_model* model, const rbml_kb* kb, double epsilon, double tolerance,
                        double* max_deviation, char** report) {
  bool failed = false;
  rbml_status st = guarded([&] {
    require(model, "model");
    require(kb, "kb");
    if (!(tolerance >= 0)) api_fail(RBML_ERR_INVALID_ARGUMENT, "tolerance must be non-negative");
    const Model& m = model->model;
    const double eps = epsilon > 0 ? epsilon : m.epsilon;
    const auto r = verify_equivalence(m, kb->kb, eps);
    if (max_deviation) *max_deviation = r.max_deviation;
    failed = !(r.max_deviation <= tolerance);
    if (report) {
      ojson rep;
      rep["epsilon"] = eps;
      rep["tolerance"] = tolerance;
      rep["max_deviation"] = r.max_deviation;
      rep["passed"] = !failed;
      rep["witness"] = assignment_json(r.witness, m.names);
      rep["names"] = m.names;
      rep["rows"] = ojson::array();
      for (const auto& row : r.rows)
        rep["rows"].push_back({{"x", bits_string(row.x)},
                               {"weighted_sat", row.weighted_sat},
                               {"energy_rank", row.energy_rank}});
      *report = dup_string(rep.dump(2) + "\n");
    }
  });
  if (st == RBML_OK && failed) {
    g_last_error = "maximum deviation exceeds tolerance";
    return RBML_ERR_VERIFY;
  }
  return st;
}

rbml_status rbml_dataset_load_csv(const char* path, const char* targets_json, rbml_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto targets = parse_name_list(targets_json);
    *out = new rbml_dataset{load_dataset_csv(path, targets)};
  });
}

rbml_status rbml_dataset_from_clauses(const rbml_kb* kb, const char* targets_json, rbml_dataset** out) {
  return guarded([&] {
    require(kb, "kb");
    require(out, "out");
    const auto targets = parse_name_list(targets_json);
    *out = new rbml_dataset{dataset_from_clauses(kb->kb, targets)};
  });
}

rbml_status rbml_ingest(const char* csv_path, const char* spec_json, rbml_dataset** out,
                        char** resolved_spec) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(spec_json, "spec_json");
    require(out, "out");
    auto result = ingest_categorical_file(csv_path, parse_onehot_spec(spec_json));
    emit(resolved_spec, to_json(result.resolved));
    *out = new rbml_dataset{std::move(result.dataset)};
  });
}

rbml_status rbml_dataset_save_csv(const rbml_dataset* d, const char* path) {
  return guarded([&] {
    require(d, "dataset");
    require(path, "path");
    save_dataset_csv(d->data, path);
  });
}

rbml_status rbml_dataset_names(const rbml_dataset* d, char** names_json) {
  return guarded([&] {
    require(d, "dataset");
    require(names_json, "names_json");
    ojson j{{"names", d->data.table.names()}, {"targets", d->data.target_names()}};
    *names_json = dup_string(j.dump());
  });
}

size_t rbml_dataset_row_count(const rbml_dataset* d) { return d ? d->data.rows.size() : 0; }
size_t rbml_dataset_column_count(const rbml_dataset* d) { return d ? d->data.table.size() : 0; }
void rbml_dataset_free(rbml_dataset* d) { delete d; }

rbml_status rbml_train(const rbml_model* model, const rbml_dataset* data, const char* config_json,
                       rbml_model** out, char** loss_csv) {
  return guarded([&] {
    require(model, "model");
    require(data, "data");
    require(out, "out");
    const auto c = parse_options(config_json,
                                 {"alpha", "beta", "lr", "momentum", "epochs", "batch_size", "cd_k", "seed",
                                  "freeze_structure", "targets"},
                                 "train config");
    TrainConfig cfg;
    cfg.alpha = c.value("alpha", cfg.alpha);
    cfg.beta = c.value("beta", cfg.beta);
    cfg.learning_rate = c.value("lr", cfg.learning_rate);
    cfg.momentum = c.value("momentum", cfg.momentum);
    cfg.epochs = c.value("epochs", cfg.epochs);
    cfg.batch_size = c.value("batch_size", cfg.batch_size);
    cfg.cd_k = c.value("cd_k", cfg.cd_k);
    cfg.seed = c.value("seed", cfg.seed);
    cfg.freeze_structure = c.value("freeze_structure", cfg.freeze_structure);
    Dataset d = data->data;
    if (c.contains("targets"))
      d.targets = resolve_names(d.table, c.at("targets").get<std::vector<std::string>>());
    auto result = train(model->model, d, cfg);
    if (loss_csv) {
      auto num = [](double v) {
        if (std::isnan(v)) return std::string();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
      };
      std::string csv = "epoch,discriminative_nll,reconstruction\n";
      csv += "0," + num(result.initial_nll) + ",\n";
      for (const auto& e : result.trace)
        csv += std::to_string(e.epoch) + "," + num(e.discriminative_nll) + "," + num(e.reconstruction) + "\n";
      *loss_csv = dup_string(csv);
    }
    *out = new rbml_model{std::move(result.model)};
  });
}

rbml_status rbml_extract(const rbml_model* model, const rbml_dataset* data, const char* options_json,
                         char** listing, char** report) {
  return guarded([&] {
    require(model, "model");
    const auto opt = parse_options(options_json, {"prune_fractions", "class"}, "extract options");
    const Model& m = model->model;
    const auto table = m.table();
    std::vector<double> fractions(std::begin(kDefaultPruneFractions), std::end(kDefaultPruneFractions));
    if (opt.contains("prune_fractions")) fractions = opt.at("prune_fractions").get<std::vector<double>>();
    auto clauses = extract_clauses(m.rbm, table, fractions);
    if (data) {
      Dataset d = align_columns(data->data, m.names);
      std::vector<std::size_t> classes = d.targets;
      if (opt.contains("class"))
        classes = resolve_names(table, opt.at("class").get<std::vector<std::string>>());
      if (classes.empty())
        api_fail(RBML_ERR_INVALID_ARGUMENT, "reliability needs class propositions");
      annotate_reliability(clauses, d, classes);
    } else if (opt.contains("class")) {
      api_fail(RBML_ERR_INVALID_ARGUMENT, "class given without a dataset");
    }
    clauses = sorted_by_confidence(std::move(clauses));
    emit(listing, format_listing(clauses, table));
    if (report) {
      ojson rep = ojson::array();
      for (const auto& ec : clauses) {
        ojson j = clause_json(ec.clause.clause, table);
        j["confidence"] = ec.clause.confidence;
        j["hidden_index"] = ec.hidden_index;
        j["distance"] = ec.distance;
        j["prune_fraction"] = ec.prune_fraction;
        j["hidden_bias"] = ec.hidden_bias;
        j["zero_column"] = ec.zero_column;
        if (ec.reliability)
          j["reliability"] = {{"satisfy", ec.reliability->satisfy}, {"violate", ec.reliability->violate}};
        rep.push_back(std::move(j));
      }
      *report = dup_string(rep.dump(2) + "\n");
    }
  });
}

}  // extern "C"
