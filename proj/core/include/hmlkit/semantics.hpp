#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hmlkit/formula.hpp"
#include "hmlkit/lts.hpp"

namespace hmlkit {

/// A set of states of one FiniteLts, stored as a bitset whose capacity is
/// the LTS's state count. Sets up to 128 states live inline.
class StateSet {
 public:
  explicit StateSet(std::size_t capacity = 0)
      : capacity_(capacity), num_words_((capacity + 63) / 64) {
    if (num_words_ > kInlineWords) heap_.assign(num_words_, 0);
  }

  static StateSet empty(std::size_t capacity) { return StateSet(capacity); }
  static StateSet full(std::size_t capacity);

  std::size_t capacity() const noexcept { return capacity_; }
  bool contains(StateId s) const noexcept {
    return s.value < capacity_ && ((data()[s.value / 64] >> (s.value % 64)) & 1U) != 0;
  }
  void insert(StateId s) noexcept {
    if (s.value < capacity_) data()[s.value / 64] |= std::uint64_t{1} << (s.value % 64);
  }
  void erase(StateId s) noexcept;

  std::size_t count() const noexcept;
  bool is_empty() const noexcept;
  std::vector<StateId> members() const;

  StateSet& operator&=(const StateSet& other) noexcept;
  StateSet& operator|=(const StateSet& other) noexcept;
  StateSet complement() const;

  friend bool operator==(const StateSet& a, const StateSet& b) noexcept;

 private:
  static constexpr std::size_t kInlineWords = 2;

  std::span<std::uint64_t> words() noexcept;
  std::span<const std::uint64_t> words() const noexcept;
  void clear_padding() noexcept;
  std::uint64_t* data() noexcept { return num_words_ > kInlineWords ? heap_.data() : inline_.data(); }
  const std::uint64_t* data() const noexcept {
    return num_words_ > kInlineWords ? heap_.data() : inline_.data();
  }

  std::size_t capacity_ = 0;
  std::size_t num_words_ = 0;
  std::array<std::uint64_t, kInlineWords> inline_{};
  std::vector<std::uint64_t> heap_;
};

struct EvalOptions {
  // Formulas taller than this are rejected with an EvaluationError instead of
  // risking stack exhaustion in the recursive evaluators.
  std::size_t max_height = 10000;
};

/// s |= f, by structural recursion with early exit on the modal quantifiers.
/// Throws EvaluationError if f mentions a label the LTS does not have or is
/// taller than options.max_height, UsageError if s is not a state.
bool satisfies(const FiniteLts& lts, StateId s, const Formula& f, const EvalOptions& options = {});

/// The states s with s |= f, found by running the top-down evaluator of
/// satisfies() from every state. Labels are resolved once.
StateSet satisfying_states(const FiniteLts& lts, const Formula& f, const EvalOptions& options = {});

/// The set of states satisfying f, computed bottom-up with set operations.
/// Diamonds take the pre-image of the body's set; boxes the complement of
/// the pre-image of the complement.
StateSet denotation(const Formula& f, const FiniteLts& lts, const EvalOptions& options = {});

/// States where satisfies() and membership in denotation() disagree. Always
/// empty unless one of the evaluators is broken.
std::vector<StateId> check_semantic_agreement(const FiniteLts& lts, const Formula& f,
                                              const EvalOptions& options = {});

}  // namespace hmlkit
