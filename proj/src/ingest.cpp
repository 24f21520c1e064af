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

#include "rbmlogic/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

using nlohmann::json;

namespace {

const char* kind_name(ColumnSpec::Kind k) {
  switch (k) {
    case ColumnSpec::Kind::category: return "category";
    case ColumnSpec::Kind::sequence: return "sequence";
    case ColumnSpec::Kind::ignore: return "ignore";
  }
  return "?";
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == line.npos ? line.npos : comma - start)));
    if (comma == line.npos) return out;
    start = comma + 1;
  }
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char ch : s)
    if (ch != ' ' && ch != '\t' && ch != '\r') out += ch;
  return out;
}

std::string position_token(int pos) {
  return pos < 0 ? "m" + std::to_string(-pos) : std::to_string(pos);
}

std::vector<int> positions(const ColumnSpec& c) {
  std::vector<int> out;
  int pos = c.start;
  while (out.size() < c.length) {
    if (!(c.skip_zero && pos == 0)) out.push_back(pos);
    ++pos;
  }
  return out;
}

std::string label(const ColumnSpec& c, const std::string& prefix, const std::string& value) {
  auto it = c.labels.find(value);
  return it != c.labels.end() ? it->second : prefix + "_" + value;
}

void add_value(std::vector<std::string>& values, const std::string& v) {
  if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
}

}  // namespace

OneHotSpec parse_onehot_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("one-hot spec: ") + e.what());
  }
  OneHotSpec spec;
  try {
    for (const auto& jc : j.at("columns")) {
      ColumnSpec c;
      c.name = jc.at("name").get<std::string>();
      const std::string kind = jc.value("kind", std::string("category"));
      if (kind == "category") c.kind = ColumnSpec::Kind::category;
      else if (kind == "sequence") c.kind = ColumnSpec::Kind::sequence;
      else if (kind == "ignore") c.kind = ColumnSpec::Kind::ignore;
      else fail(ErrorKind::parse, "column '" + c.name + "': unknown kind '" + kind + "'");
      if (jc.contains("values")) c.values = jc.at("values").get<std::vector<std::string>>();
      if (jc.contains("labels")) c.labels = jc.at("labels").get<std::map<std::string, std::string>>();
      c.start = jc.value("start", 1);
      c.skip_zero = jc.value("skip_zero", false);
      c.length = jc.value("length", std::size_t{0});
      spec.columns.push_back(std::move(c));
    }
    spec.class_column = j.value("class", std::string());
    spec.header = j.value("header", false);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("one-hot spec: ") + e.what());
  }
  return spec;
}

std::string to_json(const OneHotSpec& spec) {
  json j;
  j["columns"] = json::array();
  for (const auto& c : spec.columns) {
    json jc{{"name", c.name}, {"kind", kind_name(c.kind)}};
    if (c.kind != ColumnSpec::Kind::ignore) jc["values"] = c.values;
    if (!c.labels.empty()) jc["labels"] = c.labels;
    if (c.kind == ColumnSpec::Kind::sequence) {
      jc["start"] = c.start;
      jc["skip_zero"] = c.skip_zero;
      jc["length"] = c.length;
    }
    j["columns"].push_back(std::move(jc));
  }
  if (!spec.class_column.empty()) j["class"] = spec.class_column;
  j["header"] = spec.header;
  return j.dump(2) + "\n";
}

std::vector<std::string> proposition_names(const ColumnSpec& c) {
  std::vector<std::string> out;
  if (c.kind == ColumnSpec::Kind::category) {
    for (const auto& v : c.values) out.push_back(label(c, c.name, v));
  } else if (c.kind == ColumnSpec::Kind::sequence) {
    for (int pos : positions(c))
      for (const auto& v : c.values) out.push_back(label(c, c.name + position_token(pos), v));
  }
  return out;
}

IngestResult ingest_categorical(std::string_view csv, const OneHotSpec& spec) {
  if (spec.columns.empty()) fail(ErrorKind::invalid_argument, "one-hot spec has no columns");
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  {
    std::istringstream in{std::string(csv)};
    std::string line;
    std::size_t line_no = 0;
    bool skipped_header = !spec.header;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      if (!skipped_header) {
        skipped_header = true;
        continue;
      }
      auto cells = split(line);
      if (cells.size() != spec.columns.size())
        throw ParseError(line_no, 1, "expected " + std::to_string(spec.columns.size()) +
                                         " columns, found " + std::to_string(cells.size()));
      rows.push_back(std::move(cells));
      line_numbers.push_back(line_no);
    }
  }

  IngestResult result;
  result.resolved = spec;
  auto& cols = result.resolved.columns;
  // Resolve inferred values and sequence lengths.
  for (std::size_t k = 0; k < cols.size(); ++k) {
    auto& c = cols[k];
    if (c.kind == ColumnSpec::Kind::sequence) {
      if (c.length == 0 && !rows.empty()) c.length = strip_spaces(rows.front()[k]).size();
      if (c.values.empty())
        for (const auto& r : rows)
          for (char ch : strip_spaces(r[k])) add_value(c.values, std::string(1, ch));
    } else if (c.kind == ColumnSpec::Kind::category && c.values.empty()) {
      for (const auto& r : rows) add_value(c.values, r[k]);
    }
  }

  Dataset& d = result.dataset;
  std::vector<std::size_t> offset(cols.size(), 0);
  bool class_found = spec.class_column.empty();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    offset[k] = d.table.size();
    for (const auto& name : proposition_names(cols[k])) {
      if (d.table.find(name)) fail(ErrorKind::invalid_argument, "duplicate proposition name '" + name + "'");
      d.table.intern(name);
    }
    if (cols[k].name == spec.class_column) {
      if (cols[k].kind != ColumnSpec::Kind::category)
        fail(ErrorKind::invalid_argument, "class column must be categorical");
      for (std::size_t v = 0; v < cols[k].values.size(); ++v) d.targets.push_back(offset[k] + v);
      class_found = true;
    }
  }
  if (!class_found) fail(ErrorKind::invalid_argument, "class column '" + spec.class_column + "' not in spec");

  for (std::size_t r = 0; r < rows.size(); ++r) {
    BitVector row(d.table.size(), 0);
    const std::string where = "row " + std::to_string(line_numbers[r]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto& c = cols[k];
      if (c.kind == ColumnSpec::Kind::category) {
        auto it = std::find(c.values.begin(), c.values.end(), rows[r][k]);
        if (it == c.values.end())
          fail(ErrorKind::parse, where + ", attribute '" + c.name + "': unknown value '" + rows[r][k] + "'");
        row[offset[k] + static_cast<std::size_t>(it - c.values.begin())] = 1;
      } else if (c.kind == ColumnSpec::Kind::sequence) {
        const std::string seq = strip_spaces(rows[r][k]);
        if (seq.size() != c.length)
          fail(ErrorKind::parse, where + ", attribute '" + c.name + "': expected " +
                                     std::to_string(c.length) + " symbols, found " +
                                     std::to_string(seq.size()));
        for (std::size_t p = 0; p < seq.size(); ++p) {
          auto it = std::find(c.values.begin(), c.values.end(), std::string(1, seq[p]));
          if (it == c.values.end())
            fail(ErrorKind::parse, where + ", attribute '" + c.name + "' position " +
                                       std::to_string(p + 1) + ": unknown symbol '" + seq[p] + "'");
          row[offset[k] + p * c.values.size() + static_cast<std::size_t>(it - c.values.begin())] = 1;
        }
      }
    }
    d.rows.push_back(std::move(row));
  }
  return result;
}

IngestResult ingest_categorical_file(const std::string& path, const OneHotSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingest_categorical(ss.str(), spec);
}

}  // namespace rbmlogic
