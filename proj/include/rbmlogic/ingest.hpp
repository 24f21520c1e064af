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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rbmlogic/trainer.hpp"

namespace rbmlogic {

/// How one CSV column becomes propositions.
struct ColumnSpec {
  enum class Kind { category, sequence, ignore };

  std::string name;
  Kind kind = Kind::category;
  /// Allowed values in proposition order. Empty means "every value seen in
  /// the data, in order of first appearance".
  std::vector<std::string> values;
  /// Optional proposition name per value, replacing "<name>_<value>".
  std::map<std::string, std::string> labels;
  // Sequence columns: one symbol per position, named
  // "<name><pos>_<symbol>" with negative positions written as m<abs>.
  int start = 1;
  bool skip_zero = false;
  std::size_t length = 0;  // 0: taken from the first row
};

struct OneHotSpec {
  std::vector<ColumnSpec> columns;  // CSV column order
  std::string class_column;         // its propositions become the targets
  bool header = false;              // skip the first non-empty line
};

/// JSON form: {"columns": [{"name", "kind", "values", "labels", "start",
/// "skip_zero", "length"}], "class": "...", "header": bool}.
OneHotSpec parse_onehot_spec(std::string_view json);
std::string to_json(const OneHotSpec& spec);

/// Proposition names generated for `column`; requires resolved values.
std::vector<std::string> proposition_names(const ColumnSpec& column);

struct IngestResult {
  Dataset dataset;
  OneHotSpec resolved;  // with inferred values and lengths filled in
};

/// One-hot encodes categorical CSV rows. Every row sets exactly one
/// proposition per category column and per sequence position.
IngestResult ingest_categorical(std::string_view csv, const OneHotSpec& spec);
IngestResult ingest_categorical_file(const std::string& path, const OneHotSpec& spec);

}  // namespace rbmlogic
