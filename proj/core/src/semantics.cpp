#include "hmlkit/semantics.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "hmlkit/error.hpp"

namespace hmlkit {

StateSet StateSet::full(std::size_t capacity) {
  StateSet set(capacity);
  for (std::uint64_t& w : set.words()) w = ~std::uint64_t{0};
  set.clear_padding();
  return set;
}

std::span<std::uint64_t> StateSet::words() noexcept {
  if (num_words_ > kInlineWords) return heap_;
  return std::span<std::uint64_t>(inline_.data(), num_words_);
}

std::span<const std::uint64_t> StateSet::words() const noexcept {
  if (num_words_ > kInlineWords) return heap_;
  return std::span<const std::uint64_t>(inline_.data(), num_words_);
}

void StateSet::clear_padding() noexcept {
  if (capacity_ % 64 != 0) words().back() &= (std::uint64_t{1} << (capacity_ % 64)) - 1;
}

void StateSet::erase(StateId s) noexcept {
  if (s.value < capacity_) words()[s.value / 64] &= ~(std::uint64_t{1} << (s.value % 64));
}

std::size_t StateSet::count() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words()) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool StateSet::is_empty() const noexcept {
  auto w = words();
  return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

std::vector<StateId> StateSet::members() const {
  std::vector<StateId> out;
  auto w = words();
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::uint64_t bits = w[i]; bits != 0; bits &= bits - 1) {
      out.emplace_back(static_cast<std::uint32_t>(i * 64 + std::countr_zero(bits)));
    }
  }
  return out;
}

StateSet& StateSet::operator&=(const StateSet& other) noexcept {
  auto mine = words();
  auto theirs = other.words();
  for (std::size_t i = 0; i < mine.size(); ++i) mine[i] &= i < theirs.size() ? theirs[i] : 0;
  return *this;
}

StateSet& StateSet::operator|=(const StateSet& other) noexcept {
  auto mine = words();
  auto theirs = other.words();
  for (std::size_t i = 0; i < mine.size() && i < theirs.size(); ++i) mine[i] |= theirs[i];
  clear_padding();
  return *this;
}

StateSet StateSet::complement() const {
  StateSet out(*this);
  for (std::uint64_t& w : out.words()) w = ~w;
  out.clear_padding();
  return out;
}

bool operator==(const StateSet& a, const StateSet& b) noexcept {
  if (a.capacity_ != b.capacity_) return false;
  auto x = a.words();
  auto y = b.words();
  return std::equal(x.begin(), x.end(), y.begin());
}

namespace {

// The formula flattened in pre-order with labels resolved against one LTS.
struct Op {
  FormulaKind kind;
  std::uint32_t label;
  std::uint32_t left;  // also the body of a modality
  std::uint32_t right;
};

// Pre-order node buffer; small formulas stay on the stack.
class Program {
 public:
  std::uint32_t push(Op op) {
    if (size_ < kInline) {
      inline_[size_] = op;
    } else {
      if (size_ == kInline) heap_.assign(inline_, inline_ + kInline);
      heap_.push_back(op);
    }
    return size_++;
  }
  Op& operator[](std::uint32_t i) { return size_ <= kInline ? inline_[i] : heap_[i]; }
  const Op* data() const { return size_ <= kInline ? inline_ : heap_.data(); }
  std::uint32_t size() const { return size_; }

  static constexpr std::uint32_t kInline = 48;

 private:
  Op inline_[kInline];
  std::vector<Op> heap_;
  std::uint32_t size_ = 0;
};

std::uint32_t compile_rec(const FiniteLts& lts, const Formula& f, std::size_t depth,
                          const EvalOptions& options, Program& out) {
  if (depth > options.max_height) {
    throw EvaluationError("formula is taller than the evaluation limit of " +
                          std::to_string(options.max_height));
  }
  const FormulaKind kind = f.kind();
  const std::uint32_t at = out.push(Op{kind, 0, 0, 0});
  if (kind == FormulaKind::And || kind == FormulaKind::Or) {
    const std::uint32_t l = compile_rec(lts, f.left(), depth + 1, options, out);
    const std::uint32_t r = compile_rec(lts, f.right(), depth + 1, options, out);
    out[at].left = l;
    out[at].right = r;
  } else if (kind == FormulaKind::Diamond || kind == FormulaKind::Box) {
    const auto label = lts.find_label(f.label());
    if (!label) throw EvaluationError("unknown label \"" + f.label() + "\"");
    out[at].label = label->value;
    const std::uint32_t body = compile_rec(lts, f.body(), depth + 1, options, out);
    out[at].left = body;
  }
  return at;
}

Program compile(const FiniteLts& lts, const Formula& f, const EvalOptions& options) {
  Program ops;
  compile_rec(lts, f, 1, options, ops);
  return ops;
}

bool satisfies_rec(const FiniteLts& lts, StateId s, const Op* ops, std::uint32_t i) {
  const Op& op = ops[i];
  switch (op.kind) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::And:
      return satisfies_rec(lts, s, ops, op.left) && satisfies_rec(lts, s, ops, op.right);
    case FormulaKind::Or:
      return satisfies_rec(lts, s, ops, op.left) || satisfies_rec(lts, s, ops, op.right);
    case FormulaKind::Diamond:
      for (StateId next : lts.image(s, LabelId(op.label))) {
        if (satisfies_rec(lts, next, ops, op.left)) return true;
      }
      return false;
    case FormulaKind::Box:
      for (StateId next : lts.image(s, LabelId(op.label))) {
        if (!satisfies_rec(lts, next, ops, op.left)) return false;
      }
      return true;
  }
  throw InvariantViolation("satisfies: unknown formula kind");
}

// Single-word stand-in for StateSet, used when every state fits in 64 bits.
struct WordSet {
  std::uint64_t bits;
  std::uint64_t mask;

  static WordSet empty(std::size_t n) { return {0, n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1}; }
  static WordSet full(std::size_t n) {
    WordSet w = empty(n);
    w.bits = w.mask;
    return w;
  }
  bool contains(StateId s) const { return ((bits >> s.value) & 1U) != 0; }
  void insert(StateId s) { bits |= std::uint64_t{1} << s.value; }
  WordSet& operator&=(const WordSet& o) {
    bits &= o.bits;
    return *this;
  }
  WordSet& operator|=(const WordSet& o) {
    bits |= o.bits;
    return *this;
  }
  WordSet complement() const { return {~bits & mask, mask}; }
};

template <class Set>
Set pre_image(const FiniteLts& lts, LabelId label, const Set& targets) {
  Set out = Set::empty(lts.num_states());
  for (std::uint32_t t = 0; t < lts.num_states(); ++t) {
    if (!targets.contains(StateId(t))) continue;
    for (StateId s : lts.preimage(StateId(t), label)) out.insert(s);
  }
  return out;
}

// Children follow their parent in pre-order, so one backwards sweep sees
// every operand before the node that uses it.
template <class Set>
Set denotation_sweep(const Op* ops, std::uint32_t count, const FiniteLts& lts, Set* values) {
  const std::size_t n = lts.num_states();
  for (std::uint32_t i = count; i-- > 0;) {
    const Op& op = ops[i];
    switch (op.kind) {
      case FormulaKind::True:
        values[i] = Set::full(n);
        break;
      case FormulaKind::False:
        values[i] = Set::empty(n);
        break;
      case FormulaKind::And:
        values[i] = values[op.left];
        values[i] &= values[op.right];
        break;
      case FormulaKind::Or:
        values[i] = values[op.left];
        values[i] |= values[op.right];
        break;
      case FormulaKind::Diamond:
        values[i] = pre_image(lts, LabelId(op.label), values[op.left]);
        break;
      case FormulaKind::Box:
        values[i] = pre_image(lts, LabelId(op.label), values[op.left].complement()).complement();
        break;
    }
  }
  return values[0];
}

StateSet denote(const Program& ops, const FiniteLts& lts) {
  if (lts.num_states() > 64) {
    std::vector<StateSet> values(ops.size());
    return denotation_sweep(ops.data(), ops.size(), lts, values.data());
  }
  WordSet inline_values[Program::kInline];
  std::vector<WordSet> heap_values;
  WordSet* values = inline_values;
  if (ops.size() > Program::kInline) {
    heap_values.resize(ops.size());
    values = heap_values.data();
  }
  const WordSet word = denotation_sweep(ops.data(), ops.size(), lts, values);
  StateSet out(lts.num_states());
  for (std::uint64_t bits = word.bits; bits != 0; bits &= bits - 1) {
    out.insert(StateId(static_cast<std::uint32_t>(std::countr_zero(bits))));
  }
  return out;
}

StateSet run_everywhere(const Program& ops, const FiniteLts& lts) {
  StateSet out(lts.num_states());
  for (std::uint32_t s = 0; s < lts.num_states(); ++s) {
    if (satisfies_rec(lts, StateId(s), ops.data(), 0)) out.insert(StateId(s));
  }
  return out;
}

}  // namespace

bool satisfies(const FiniteLts& lts, StateId s, const Formula& f, const EvalOptions& options) {
  if (!lts.is_state(s)) {
    throw UsageError("state " + std::to_string(s.value) + " is not in [0, " +
                     std::to_string(lts.num_states()) + ")");
  }
  const Program ops = compile(lts, f, options);
  return satisfies_rec(lts, s, ops.data(), 0);
}

StateSet denotation(const Formula& f, const FiniteLts& lts, const EvalOptions& options) {
  return denote(compile(lts, f, options), lts);
}

StateSet satisfying_states(const FiniteLts& lts, const Formula& f, const EvalOptions& options) {
  return run_everywhere(compile(lts, f, options), lts);
}

std::vector<StateId> check_semantic_agreement(const FiniteLts& lts, const Formula& f,
                                              const EvalOptions& options) {
  const Program ops = compile(lts, f, options);
  const StateSet denoted = denote(ops, lts);
  const StateSet satisfied = run_everywhere(ops, lts);
  std::vector<StateId> mismatches;
  for (std::uint32_t s = 0; s < lts.num_states(); ++s) {
    if (satisfied.contains(StateId(s)) != denoted.contains(StateId(s))) mismatches.emplace_back(s);
  }
  return mismatches;
}

}  // namespace hmlkit
