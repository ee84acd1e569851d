#include "hmlkit/formula.hpp"

#include <algorithm>
#include <ostream>
#include <utility>

#include "hmlkit/error.hpp"

namespace hmlkit {

Formula::Formula() : Formula(tt()) {}

Formula Formula::tt() {
  static const auto node =
      std::make_shared<const Node>(Node{FormulaKind::True, {}, Formula(nullptr), Formula(nullptr)});
  return Formula(node);
}

Formula Formula::ff() {
  static const auto node =
      std::make_shared<const Node>(Node{FormulaKind::False, {}, Formula(nullptr), Formula(nullptr)});
  return Formula(node);
}

Formula Formula::conj(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::And, {}, std::move(left), std::move(right)}));
}

Formula Formula::disj(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Or, {}, std::move(left), std::move(right)}));
}

Formula Formula::diamond(std::string label, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Diamond, std::move(label), std::move(body), Formula(nullptr)}));
}

Formula Formula::box(std::string label, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Box, std::move(label), std::move(body), Formula(nullptr)}));
}

Formula Formula::conj_all(std::vector<Formula> parts) {
  if (parts.empty()) return tt();
  Formula acc = std::move(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(std::move(parts[i]), std::move(acc));
  return acc;
}

Formula Formula::disj_all(std::vector<Formula> parts) {
  if (parts.empty()) return ff();
  Formula acc = std::move(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = disj(std::move(parts[i]), std::move(acc));
  return acc;
}

void Formula::misuse(const char* accessor) {
  const std::string name(accessor);
  if (name == "left" || name == "right") {
    throw UsageError(name + "() on a formula that is not a conjunction/disjunction");
  }
  throw UsageError(name + "() on a formula that is not a modality");
}

bool operator==(const Formula& a, const Formula& b) {
  const Formula::Node* x = a.node_.get();
  const Formula::Node* y = b.node_.get();
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::And:
    case FormulaKind::Or:
      return x->left == y->left && x->right == y->right;
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return x->label == y->label && x->left == y->left;
  }
  return false;
}

Formula neg(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
      return Formula::ff();
    case FormulaKind::False:
      return Formula::tt();
    case FormulaKind::And:
      return Formula::disj(neg(f.left()), neg(f.right()));
    case FormulaKind::Or:
      return Formula::conj(neg(f.left()), neg(f.right()));
    case FormulaKind::Diamond:
      return Formula::box(f.label(), neg(f.body()));
    case FormulaKind::Box:
      return Formula::diamond(f.label(), neg(f.body()));
  }
  throw InvariantViolation("neg: unknown formula kind");
}

std::size_t modal_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return 0;
    case FormulaKind::And:
    case FormulaKind::Or:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return 1 + modal_depth(f.body());
  }
  return 0;
}

std::size_t formula_size(const Formula& f) {
  if (f.is_binary()) return 1 + formula_size(f.left()) + formula_size(f.right());
  if (f.is_modal()) return 1 + formula_size(f.body());
  return 1;
}

std::size_t formula_height(const Formula& f) {
  std::vector<std::pair<Formula, std::size_t>> stack{{f, 1}};
  std::size_t height = 0;
  while (!stack.empty()) {
    auto [g, h] = std::move(stack.back());
    stack.pop_back();
    height = std::max(height, h);
    if (g.is_binary()) {
      stack.emplace_back(g.left(), h + 1);
      stack.emplace_back(g.right(), h + 1);
    } else if (g.is_modal()) {
      stack.emplace_back(g.body(), h + 1);
    }
  }
  return height;
}

bool is_bare_label(std::string_view label) {
  if (label.empty()) return false;
  return std::none_of(label.begin(), label.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' ||
           c == '<' || c == '>' || c == '[' || c == ']' || c == '(' || c == ')' || c == '"' ||
           c == '&' || c == '|' || c == '#';
  });
}

namespace {

// Binding strength of the context a subformula is printed in.
enum Precedence { kOr = 0, kAnd = 1, kUnary = 2 };

void print_label(std::string& out, const std::string& label) {
  if (is_bare_label(label)) {
    out += label;
    return;
  }
  out.push_back('"');
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void print(std::string& out, const Formula& f, Precedence context) {
  switch (f.kind()) {
    case FormulaKind::True:
      out += "tt";
      return;
    case FormulaKind::False:
      out += "ff";
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_or = f.kind() == FormulaKind::Or;
      const Precedence own = is_or ? kOr : kAnd;
      const bool parens = context > own;
      if (parens) out.push_back('(');
      print(out, f.left(), is_or ? kAnd : kUnary);
      out += is_or ? " | " : " & ";
      print(out, f.right(), own);
      if (parens) out.push_back(')');
      return;
    }
    case FormulaKind::Diamond:
    case FormulaKind::Box: {
      const bool is_diamond = f.kind() == FormulaKind::Diamond;
      out.push_back(is_diamond ? '<' : '[');
      print_label(out, f.label());
      out.push_back(is_diamond ? '>' : ']');
      print(out, f.body(), kUnary);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(out, f, kOr);
  return out;
}

std::ostream& operator<<(std::ostream& out, const Formula& f) { return out << to_string(f); }

}  // namespace hmlkit
