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

#include "rbmlogic/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rbmlogic/error.hpp"

namespace rbmlogic {

// ---------------------------------------------------------------------------
// PropositionTable

PropositionTable::PropositionTable(std::span<const std::string> names) {
  for (const auto& n : names) {
    if (find(n)) fail(ErrorKind::invalid_argument, "duplicate proposition '" + n + "'");
    intern(n);
  }
}

std::size_t PropositionTable::intern(std::string_view name) {
  if (name.empty()) fail(ErrorKind::invalid_argument, "empty proposition name");
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  names_.emplace_back(name);
  index_.emplace(names_.back(), names_.size() - 1);
  return names_.size() - 1;
}

std::optional<std::size_t> PropositionTable::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t PropositionTable::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  fail(ErrorKind::invalid_argument, "unknown proposition '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::make(Connective c, const Formula* lhs, const Formula* rhs) {
  auto node = std::make_shared<Node>();
  node->connective = c;
  if (lhs) node->lhs = lhs->node_;
  if (rhs) node->rhs = rhs->node_;
  return Formula(std::move(node));
}

Formula Formula::var(std::size_t index) {
  auto node = std::make_shared<Node>();
  node->connective = Connective::var;
  node->var = index;
  return Formula(std::move(node));
}

Formula::Formula() : node_(top().node_) {}

Formula Formula::top() { return make(Connective::top, nullptr, nullptr); }
Formula Formula::bottom() { return make(Connective::bottom, nullptr, nullptr); }
Formula Formula::negation(Formula f) { return make(Connective::negation, &f, nullptr); }
Formula Formula::conjunction(Formula l, Formula r) { return make(Connective::conjunction, &l, &r); }
Formula Formula::disjunction(Formula l, Formula r) { return make(Connective::disjunction, &l, &r); }
Formula Formula::implication(Formula body, Formula head) {
  return make(Connective::implication, &body, &head);
}
Formula Formula::equivalence(Formula l, Formula r) { return make(Connective::equivalence, &l, &r); }
Formula Formula::exclusive_or(Formula l, Formula r) { return make(Connective::exclusive_or, &l, &r); }

bool Formula::is_binary() const noexcept {
  switch (connective()) {
    case Connective::conjunction:
    case Connective::disjunction:
    case Connective::implication:
    case Connective::equivalence:
    case Connective::exclusive_or:
      return true;
    default:
      return false;
  }
}

bool Formula::is_literal() const noexcept {
  if (connective() == Connective::var) return true;
  return connective() == Connective::negation &&
         node_->lhs->connective == Connective::var;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (connective() != other.connective()) return false;
  if (connective() == Connective::var) return var_index() == other.var_index();
  if (connective() == Connective::top || connective() == Connective::bottom) return true;
  if (!(lhs() == other.lhs())) return false;
  return !is_binary() || rhs() == other.rhs();
}

namespace {

void collect_vars(const Formula& f, std::vector<std::size_t>& out) {
  switch (f.connective()) {
    case Connective::var:
      out.push_back(f.var_index());
      return;
    case Connective::top:
    case Connective::bottom:
      return;
    case Connective::negation:
      collect_vars(f.lhs(), out);
      return;
    default:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
  }
}

}  // namespace

std::vector<std::size_t> free_variables(const Formula& f) {
  std::vector<std::size_t> vars;
  collect_vars(f, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::size_t max_var_index(const Formula& f) {
  auto vars = free_variables(f);
  return vars.empty() ? 0 : vars.back();
}

// ---------------------------------------------------------------------------
// Assignment

Assignment Assignment::from_bits(std::span<const std::uint8_t> bits) {
  Assignment a(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) fail(ErrorKind::invalid_argument, "assignment values must be 0 or 1");
    a.set(i, bits[i] != 0);
  }
  return a;
}

Assignment Assignment::from_mask(std::uint64_t mask, std::size_t universe) {
  Assignment a(universe);
  for (std::size_t i = 0; i < universe; ++i) a.set(i, (mask >> i) & 1U);
  return a;
}

bool Assignment::value(std::size_t i) const {
  if (!assigned(i)) {
    fail(ErrorKind::precondition, "proposition " + std::to_string(i) + " is unassigned");
  }
  return values_[i] == 1;
}

bool Assignment::is_total() const noexcept {
  return std::none_of(values_.begin(), values_.end(),
                      [](std::int8_t v) { return v == kUnassigned; });
}

std::vector<std::size_t> Assignment::assigned_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != kUnassigned) out.push_back(i);
  return out;
}

std::vector<std::size_t> Assignment::unassigned_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] == kUnassigned) out.push_back(i);
  return out;
}

std::vector<std::uint8_t> Assignment::bits() const {
  std::vector<std::uint8_t> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] == 1 ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { ident, lparen, rparen, tilde, amp, bar, caret, larrow, rarrow, iff, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view text, std::size_t line, std::size_t col0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t col = col0 + i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::ident, std::string(text.substr(i, j - i)), col});
      i = j;
      continue;
    }
    auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
    if (starts("<->")) {
      out.push_back({Tok::iff, "<->", col});
      i += 3;
    } else if (starts("<-")) {
      out.push_back({Tok::larrow, "<-", col});
      i += 2;
    } else if (starts("->")) {
      out.push_back({Tok::rarrow, "->", col});
      i += 2;
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::lparen; break;
        case ')': k = Tok::rparen; break;
        case '~': k = Tok::tilde; break;
        case '&': k = Tok::amp; break;
        case '|': k = Tok::bar; break;
        case '^': k = Tok::caret; break;
        default:
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
      out.push_back({k, std::string(1, c), col});
      ++i;
    }
  }
  out.push_back({Tok::end, "", col0 + text.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, PropositionTable& table, std::size_t line)
      : tokens_(std::move(tokens)), table_(table), line_(line) {}

  Formula parse() {
    if (peek().kind == Tok::end) throw ParseError(line_, peek().column, "empty formula");
    Formula f = equivalence();
    if (peek().kind != Tok::end) error("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(line_, peek().column, msg);
  }

  Formula equivalence() {
    Formula f = implication();
    while (accept(Tok::iff)) f = Formula::equivalence(f, implication());
    return f;
  }

  // Implication does not chain; `a <- b <- c` needs parentheses.
  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::larrow)) {
      Formula body = disjunction();
      lhs = Formula::implication(body, lhs);
    } else if (accept(Tok::rarrow)) {
      Formula head = disjunction();
      lhs = Formula::implication(lhs, head);
    } else {
      return lhs;
    }
    if (peek().kind == Tok::larrow || peek().kind == Tok::rarrow)
      error("chained implication needs parentheses");
    return lhs;
  }

  Formula disjunction() {
    Formula f = exclusive_or();
    while (accept(Tok::bar)) f = Formula::disjunction(f, exclusive_or());
    return f;
  }

  Formula exclusive_or() {
    Formula f = conjunction();
    while (accept(Tok::caret)) f = Formula::exclusive_or(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept(Tok::amp)) f = Formula::conjunction(f, unary());
    return f;
  }

  Formula unary() {
    if (accept(Tok::tilde)) return Formula::negation(unary());
    return atom();
  }

  Formula atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::ident: {
        advance();
        if (t.text == "true") return Formula::top();
        if (t.text == "false") return Formula::bottom();
        return Formula::var(table_.intern(t.text));
      }
      case Tok::lparen: {
        advance();
        Formula f = equivalence();
        if (!accept(Tok::rparen)) error("expected ')'");
        return f;
      }
      case Tok::end:
        error("unexpected end of formula");
      default:
        error("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  PropositionTable& table_;
  std::size_t line_;
};

Formula parse_at(std::string_view text, PropositionTable& table, std::size_t line,
                 std::size_t col0) {
  Parser p(tokenize(text, line, col0), table, line);
  return p.parse();
}

}  // namespace

Formula parse_formula(std::string_view text, PropositionTable& table, std::size_t line) {
  return parse_at(text, table, line, 1);
}

KnowledgeBase parse_knowledge_base(std::string_view text, PropositionTable seed) {
  KnowledgeBase kb;
  kb.table = std::move(seed);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) continue;

    double weight = 1.0;
    const char c = line[i];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.') {
      std::size_t num = i + (c == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(line.data() + num, line.data() + line.size(), weight);
      if (ec != std::errc{}) throw ParseError(line_no, i + 1, "malformed weight");
      std::size_t j = static_cast<std::size_t>(ptr - line.data());
      while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j == line.size() || line[j] != ':')
        throw ParseError(line_no, j + 1, "expected ':' after weight");
      if (!std::isfinite(weight)) throw ParseError(line_no, i + 1, "weight must be finite");
      i = j + 1;
    }

    std::string_view body = line.substr(i);
    Formula f = parse_at(body, kb.table, line_no, i + 1);
    std::string src(body);
    src.erase(0, src.find_first_not_of(" \t"));
    src.erase(src.find_last_not_of(" \t") + 1);
    kb.items.push_back(WeightedFormula{weight, std::move(f), std::move(src)});
    if (end == text.size()) break;
  }
  return kb;
}

KnowledgeBase load_knowledge_base(const std::string& path, PropositionTable seed) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open knowledge base '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_knowledge_base(ss.str(), std::move(seed));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Connective c) {
  switch (c) {
    case Connective::equivalence: return 1;
    case Connective::implication: return 2;
    case Connective::disjunction: return 3;
    case Connective::exclusive_or: return 4;
    case Connective::conjunction: return 5;
    case Connective::negation: return 6;
    default: return 7;
  }
}

const char* symbol(Connective c) {
  switch (c) {
    case Connective::equivalence: return " <-> ";
    case Connective::implication: return " <- ";
    case Connective::disjunction: return " | ";
    case Connective::exclusive_or: return " ^ ";
    case Connective::conjunction: return " & ";
    default: return "";
  }
}

void print(const Formula& f, const PropositionTable& table, std::string& out);

void print_operand(const Formula& f, const PropositionTable& table, bool parens,
                   std::string& out) {
  if (parens) out += '(';
  print(f, table, out);
  if (parens) out += ')';
}

void print(const Formula& f, const PropositionTable& table, std::string& out) {
  const Connective c = f.connective();
  const int prec = precedence(c);
  switch (c) {
    case Connective::var:
      out += table.name(f.var_index());
      return;
    case Connective::top:
      out += "true";
      return;
    case Connective::bottom:
      out += "false";
      return;
    case Connective::negation:
      out += '~';
      print_operand(f.lhs(), table, precedence(f.lhs().connective()) < prec, out);
      return;
    case Connective::implication:
      print_operand(f.rhs(), table, precedence(f.rhs().connective()) <= prec, out);
      out += symbol(c);
      print_operand(f.lhs(), table, precedence(f.lhs().connective()) <= prec, out);
      return;
    default:
      // Left-associative binary connectives.
      print_operand(f.lhs(), table, precedence(f.lhs().connective()) < prec, out);
      out += symbol(c);
      print_operand(f.rhs(), table, precedence(f.rhs().connective()) <= prec, out);
  }
}

}  // namespace

std::string to_string(const Formula& f, const PropositionTable& table) {
  std::string out;
  print(f, table, out);
  return out;
}

// ---------------------------------------------------------------------------
// Semantics

bool evaluate(const Formula& f, const Assignment& a) {
  switch (f.connective()) {
    case Connective::var:
      if (f.var_index() >= a.size())
        fail(ErrorKind::precondition, "proposition index outside the assignment");
      return a.value(f.var_index());
    case Connective::top: return true;
    case Connective::bottom: return false;
    case Connective::negation: return !evaluate(f.lhs(), a);
    default: break;
  }
  // Both sides are always evaluated so an unassigned variable is reported
  // regardless of short-circuiting.
  const bool l = evaluate(f.lhs(), a);
  const bool r = evaluate(f.rhs(), a);
  switch (f.connective()) {
    case Connective::conjunction: return l && r;
    case Connective::disjunction: return l || r;
    case Connective::implication: return !l || r;
    case Connective::equivalence: return l == r;
    case Connective::exclusive_or: return l != r;
    default: return false;
  }
}

double weighted_sat(const KnowledgeBase& kb, const Assignment& a) {
  double total = 0.0;
  for (const auto& item : kb.items)
    if (evaluate(item.formula, a)) total += item.weight;
  return total;
}

}  // namespace rbmlogic
