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

#include "rbmlogic/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

using nlohmann::json;

std::vector<double> ClauseAnnotation::pattern(std::size_t n_visible) const {
  std::vector<double> p(n_visible, 0.0);
  for (auto t : clause.pos) p.at(t) = 1.0;
  for (auto k : clause.neg) p.at(k) = -1.0;
  return p;
}

bool Model::fully_annotated() const {
  return annotations.size() == rbm.n_hidden &&
         std::all_of(annotations.begin(), annotations.end(),
                     [](const auto& a) { return a.has_value(); });
}

void Model::validate() const {
  rbm.validate();
  if (names.size() != rbm.n_visible)
    fail(ErrorKind::invalid_argument, "model names do not match the visible layer");
  if (annotations.size() != rbm.n_hidden)
    fail(ErrorKind::invalid_argument, "clause_annotations must have one entry per hidden unit");
  PropositionTable check(names);  // throws on duplicates
  for (const auto& a : annotations) {
    if (!a) continue;
    for (auto v : a->clause.variables())
      if (v >= names.size())
        fail(ErrorKind::invalid_argument, "clause annotation refers to an unknown visible unit");
  }
}

std::string to_json(const Model& model) {
  model.validate();
  const Rbm& m = model.rbm;
  json doc;
  doc["n_visible"] = m.n_visible;
  doc["n_hidden"] = m.n_hidden;
  doc["names"] = model.names;
  json rows = json::array();
  for (std::size_t i = 0; i < m.n_visible; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.n_hidden; ++j) row.push_back(m.w(i, j));
    rows.push_back(std::move(row));
  }
  doc["W"] = std::move(rows);
  doc["a"] = m.visible_bias;
  doc["b"] = m.hidden_bias;
  doc["e0"] = m.offset;
  doc["tau"] = m.temperature;
  doc["epsilon"] = model.epsilon;

  const PropositionTable table = model.table();
  json notes = json::array();
  for (const auto& a : model.annotations) {
    if (!a) {
      notes.push_back(nullptr);
      continue;
    }
    json pos = json::array(), neg = json::array();
    for (auto t : a->clause.pos) pos.push_back(model.names[t]);
    for (auto k : a->clause.neg) neg.push_back(model.names[k]);
    notes.push_back({{"clause", to_string(a->clause, table)},
                     {"pos", std::move(pos)},
                     {"neg", std::move(neg)},
                     {"confidence", a->confidence},
                     {"margin", a->margin},
                     {"source", a->source}});
  }
  doc["clause_annotations"] = std::move(notes);
  return doc.dump(2) + "\n";
}

namespace {

template <typename T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name)) fail(ErrorKind::invalid_argument, std::string("model file lacks '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, std::string("model field '") + name + "': " + e.what());
  }
}

}  // namespace

Model model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::invalid_argument, "model file must be a JSON object");

  Model model;
  const auto nv = field<std::size_t>(doc, "n_visible");
  const auto nh = field<std::size_t>(doc, "n_hidden");
  model.rbm = Rbm(nv, nh);
  model.names = field<std::vector<std::string>>(doc, "names");
  const auto rows = field<std::vector<std::vector<double>>>(doc, "W");
  if (rows.size() != nv) fail(ErrorKind::invalid_argument, "W must have n_visible rows");
  for (std::size_t i = 0; i < nv; ++i) {
    if (rows[i].size() != nh) fail(ErrorKind::invalid_argument, "W rows must have n_hidden entries");
    for (std::size_t j = 0; j < nh; ++j) model.rbm.w(i, j) = rows[i][j];
  }
  model.rbm.visible_bias = field<std::vector<double>>(doc, "a");
  model.rbm.hidden_bias = field<std::vector<double>>(doc, "b");
  model.rbm.offset = field<double>(doc, "e0");
  model.rbm.temperature = field<double>(doc, "tau");
  model.epsilon = field<double>(doc, "epsilon");

  const PropositionTable table(model.names);
  model.annotations.assign(nh, std::nullopt);
  if (doc.contains("clause_annotations")) {
    const json& notes = doc.at("clause_annotations");
    if (!notes.is_array() || notes.size() != nh)
      fail(ErrorKind::invalid_argument, "clause_annotations must have n_hidden entries");
    for (std::size_t j = 0; j < nh; ++j) {
      const json& n = notes[j];
      if (n.is_null()) continue;
      std::vector<std::size_t> pos, neg;
      for (const auto& name : field<std::vector<std::string>>(n, "pos")) pos.push_back(table.index_of(name));
      for (const auto& name : field<std::vector<std::string>>(n, "neg")) neg.push_back(table.index_of(name));
      ClauseAnnotation a;
      a.clause = ConjunctiveClause::make(std::move(pos), std::move(neg));
      a.confidence = field<double>(n, "confidence");
      a.margin = n.contains("margin") ? n.at("margin").get<double>() : model.epsilon;
      a.source = n.contains("source") ? n.at("source").get<std::string>() : "";
      model.annotations[j] = std::move(a);
    }
  }
  model.validate();
  return model;
}

void save_model(const Model& model, const std::string& path) {
  const std::string text = to_json(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write model file '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::io, "failed writing model file '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace rbmlogic
