#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hmlkit {

enum class FormulaKind : std::uint8_t { True, False, And, Or, Diamond, Box };

/// An HML proposition: tt, ff, conjunction, disjunction, <label>body and
/// [label]body. There is no negation connective; see neg().
///
/// Formulas are immutable trees with shared subterms and structural
/// equality. Labels are kept by name and resolved against an LTS only when
/// the formula is evaluated.
class Formula {
 public:
  Formula();  // tt

  static Formula tt();
  static Formula ff();
  static Formula conj(Formula left, Formula right);
  static Formula disj(Formula left, Formula right);
  static Formula diamond(std::string label, Formula body);
  static Formula box(std::string label, Formula body);

  // Right-nested conjunction; the empty conjunction is tt.
  static Formula conj_all(std::vector<Formula> parts);
  // Right-nested disjunction; the empty disjunction is ff.
  static Formula disj_all(std::vector<Formula> parts);

  FormulaKind kind() const noexcept;
  bool is_binary() const noexcept;
  bool is_modal() const noexcept;

  // Operands of And/Or.
  const Formula& left() const;
  const Formula& right() const;
  // Label and body of Diamond/Box.
  const std::string& label() const;
  const Formula& body() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  [[noreturn]] static void misuse(const char* accessor);
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  explicit Formula(std::nullptr_t) {}

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  FormulaKind kind;
  std::string label;
  Formula left;  // also the body of a modality
  Formula right;
};

inline FormulaKind Formula::kind() const noexcept { return node_->kind; }

inline bool Formula::is_binary() const noexcept {
  return node_->kind == FormulaKind::And || node_->kind == FormulaKind::Or;
}

inline bool Formula::is_modal() const noexcept {
  return node_->kind == FormulaKind::Diamond || node_->kind == FormulaKind::Box;
}

inline const Formula& Formula::left() const {
  if (!is_binary()) misuse("left");
  return node_->left;
}

inline const Formula& Formula::right() const {
  if (!is_binary()) misuse("right");
  return node_->right;
}

inline const std::string& Formula::label() const {
  if (!is_modal()) misuse("label");
  return node_->label;
}

inline const Formula& Formula::body() const {
  if (!is_modal()) misuse("body");
  return node_->left;
}

// Dual formula: swaps tt/ff, and/or, diamond/box all the way down.
Formula neg(const Formula& f);

// Number of nested modalities along the deepest path.
std::size_t modal_depth(const Formula& f);
// Number of AST nodes.
std::size_t formula_size(const Formula& f);
// Longest root-to-leaf path, counted in nodes. Iterative, safe on any height.
std::size_t formula_height(const Formula& f);

/// Concrete syntax:
///
///   f ::= f '|' f | f '&' f | '<' label '>' f | '[' label ']' f
///       | 'tt' | 'ff' | '(' f ')'
///
/// Modalities bind tightest, then '&', then '|'; both binary operators
/// associate to the right. A label is either a quoted string or a bare run of
/// characters other than whitespace and <>[]()"&|#.
Formula parse_formula(std::string_view text);

// One formula per non-blank line; '#' outside a quoted label starts a comment.
std::vector<Formula> parse_formula_list(std::string_view text);

// Minimal parenthesisation; parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f);
std::ostream& operator<<(std::ostream& out, const Formula& f);

// True if the label can be printed without quotes.
bool is_bare_label(std::string_view label);

// Upper bound on parser nesting; deeper input is rejected with a ParseError.
inline constexpr std::size_t kMaxFormulaNesting = 10000;

}  // namespace hmlkit
