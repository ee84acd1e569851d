#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hmlkit {

// Dense index of a state in [0, num_states).
struct StateId {
  std::uint32_t value = 0;

  constexpr StateId() = default;
  constexpr explicit StateId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(StateId, StateId) = default;
};

// Dense index of an interned label in [0, num_labels).
struct LabelId {
  std::uint32_t value = 0;

  constexpr LabelId() = default;
  constexpr explicit LabelId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(LabelId, LabelId) = default;
};

struct Transition {
  StateId source;
  LabelId label;
  StateId target;

  friend constexpr auto operator<=>(const Transition&, const Transition&) = default;
};

// A transition as written by a user, with the label still spelled out.
struct NamedTransition {
  std::size_t source = 0;
  std::string label;
  std::size_t target = 0;
};

/// An explicit, immutable, finite labelled transition system.
///
/// The transition relation is a set: duplicates given at construction are
/// collapsed. Successors and predecessors of a state are stored per
/// (state, label) in sorted order, so image() and preimage() are O(1) views.
class FiniteLts {
 public:
  /// Builds an LTS from spelled-out transitions. Throws LtsError naming the
  /// first triple whose state is out of range or whose label is not listed,
  /// and on duplicate label names.
  static FiniteLts build(std::size_t num_states, std::vector<std::string> labels,
                         std::span<const NamedTransition> transitions,
                         StateId initial = StateId{0});

  /// Id-level constructor; the same validation as build() applies.
  FiniteLts(std::size_t num_states, std::vector<std::string> labels,
            std::vector<Transition> transitions, StateId initial = StateId{0});

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_labels() const noexcept { return labels_.size(); }
  std::size_t num_transitions() const noexcept { return transitions_.size(); }

  // Only carried for the .aut round trip; no semantic operation reads it.
  StateId initial_state() const noexcept { return initial_; }

  std::span<const std::string> labels() const noexcept { return labels_; }
  const std::string& label_name(LabelId label) const;
  std::optional<LabelId> find_label(std::string_view name) const;

  bool is_state(StateId s) const noexcept { return s.value < num_states_; }
  bool is_label(LabelId l) const noexcept { return l.value < labels_.size(); }

  // Sorted by (source, label, target).
  std::span<const Transition> transitions() const noexcept { return transitions_; }

  /// { s' | s -label-> s' }, sorted ascending. Throws UsageError on bad ids.
  std::span<const StateId> image(StateId s, LabelId label) const {
    if (!is_state(s) || !is_label(label)) reject(s, label);
    const std::size_t k = slot(s, label);
    return {forward_targets_.data() + forward_offsets_[k],
            forward_offsets_[k + 1] - forward_offsets_[k]};
  }
  /// { s | s -label-> target }, sorted ascending. Throws UsageError on bad ids.
  std::span<const StateId> preimage(StateId target, LabelId label) const {
    if (!is_state(target) || !is_label(label)) reject(target, label);
    const std::size_t k = slot(target, label);
    return {backward_sources_.data() + backward_offsets_[k],
            backward_offsets_[k + 1] - backward_offsets_[k]};
  }
  bool has_transition(StateId s, LabelId label, StateId target) const;

  std::vector<StateId> states() const;

  /// Equality of the labelled transition relation: state count, initial
  /// state, label names and the set of (source, label name, target) triples.
  /// Label ids are an encoding detail and may differ.
  friend bool operator==(const FiniteLts& a, const FiniteLts& b);

 private:
  void check_state(StateId s) const;
  void check_label(LabelId l) const;
  [[noreturn]] void reject(StateId s, LabelId l) const;
  std::size_t slot(StateId s, LabelId l) const noexcept {
    return static_cast<std::size_t>(s.value) * labels_.size() + l.value;
  }

  std::size_t num_states_ = 0;
  std::vector<std::string> labels_;
  std::map<std::string, std::uint32_t, std::less<>> label_index_;
  StateId initial_;
  std::vector<Transition> transitions_;
  std::vector<std::uint32_t> forward_offsets_;
  std::vector<StateId> forward_targets_;
  std::vector<std::uint32_t> backward_offsets_;
  std::vector<StateId> backward_sources_;
};

}  // namespace hmlkit
