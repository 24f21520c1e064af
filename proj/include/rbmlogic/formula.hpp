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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rbmlogic {

/// Ordered set of proposition names. Position in the table is the visible
/// unit index of the proposition in every compiled network.
class PropositionTable {
 public:
  PropositionTable() = default;
  explicit PropositionTable(std::span<const std::string> names);

  /// Returns the index of `name`, appending it if it is new.
  std::size_t intern(std::string_view name);
  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find() but throws when the name is unknown.
  std::size_t index_of(std::string_view name) const;

  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  bool operator==(const PropositionTable& other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class Connective {
  var,
  negation,
  conjunction,
  disjunction,
  implication,  // lhs = body, rhs = head
  equivalence,
  exclusive_or,
  top,
  bottom,
};

/// Immutable propositional formula. Copies share structure.
class Formula {
 public:
  /// The constant true.
  Formula();

  static Formula var(std::size_t index);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula body, Formula head);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula exclusive_or(Formula lhs, Formula rhs);

  Connective connective() const noexcept { return node_->connective; }
  std::size_t var_index() const noexcept { return node_->var; }
  /// Operand of a negation, left operand of a binary node, body of an
  /// implication.
  Formula lhs() const { return Formula(node_->lhs); }
  /// Right operand of a binary node, head of an implication.
  Formula rhs() const { return Formula(node_->rhs); }

  bool is_binary() const noexcept;
  bool is_literal() const noexcept;

  /// Structural equality.
  bool operator==(const Formula& other) const;

 private:
  struct Node {
    Connective connective;
    std::size_t var = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Connective c, const Formula* lhs, const Formula* rhs);

  std::shared_ptr<const Node> node_;
};

/// Sorted, duplicate-free indices of the propositions occurring in `f`.
std::vector<std::size_t> free_variables(const Formula& f);
std::size_t max_var_index(const Formula& f);

/// Total or partial truth assignment over a proposition universe.
class Assignment {
 public:
  Assignment() = default;
  /// All propositions unassigned.
  explicit Assignment(std::size_t universe) : values_(universe, kUnassigned) {}
  /// Total assignment from a 0/1 vector.
  static Assignment from_bits(std::span<const std::uint8_t> bits);
  /// Total assignment from the low `universe` bits of `mask` (bit i = prop i).
  static Assignment from_mask(std::uint64_t mask, std::size_t universe);

  std::size_t size() const noexcept { return values_.size(); }
  bool assigned(std::size_t i) const { return values_.at(i) != kUnassigned; }
  bool value(std::size_t i) const;
  void set(std::size_t i, bool v) { values_.at(i) = v ? 1 : 0; }
  void clear(std::size_t i) { values_.at(i) = kUnassigned; }

  bool is_total() const noexcept;
  std::vector<std::size_t> assigned_indices() const;
  std::vector<std::size_t> unassigned_indices() const;
  /// 0/1 vector; unassigned entries map to 0.
  std::vector<std::uint8_t> bits() const;

  bool operator==(const Assignment&) const = default;

 private:
  static constexpr std::int8_t kUnassigned = -1;
  std::vector<std::int8_t> values_;
};

struct WeightedFormula {
  double weight = 1.0;
  Formula formula;
  std::string text;  // source text, kept for reports
};

struct KnowledgeBase {
  PropositionTable table;
  std::vector<WeightedFormula> items;
};

/// Parses one formula; new proposition names are appended to `table`.
/// `line` offsets reported error positions.
Formula parse_formula(std::string_view text, PropositionTable& table,
                      std::size_t line = 1);

/// Parses a whole knowledge base file. Names already present in `seed`
/// keep their positions; new names follow in order of first appearance.
KnowledgeBase parse_knowledge_base(std::string_view text,
                                   PropositionTable seed = {});
KnowledgeBase load_knowledge_base(const std::string& path,
                                  PropositionTable seed = {});

/// Prints `f` in the knowledge-base grammar with minimal parentheses.
std::string to_string(const Formula& f, const PropositionTable& table);

bool evaluate(const Formula& f, const Assignment& a);
/// Sum of the weights of the formulas satisfied by the total assignment.
double weighted_sat(const KnowledgeBase& kb, const Assignment& a);

}  // namespace rbmlogic
