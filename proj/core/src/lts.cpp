#include "hmlkit/lts.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

#include "hmlkit/error.hpp"

namespace hmlkit {

namespace {

std::string describe(std::size_t source, const std::string& label, std::size_t target) {
  return "(" + std::to_string(source) + ", \"" + label + "\", " + std::to_string(target) + ")";
}

// CSR layout: offsets has one entry per (state, label) slot plus a sentinel.
template <typename Key, typename Value>
void fill_index(const std::vector<Transition>& sorted, std::size_t num_slots, Key key,
                Value value, std::vector<std::uint32_t>& offsets,
                std::vector<StateId>& values) {
  offsets.assign(num_slots + 1, 0);
  for (const Transition& t : sorted) ++offsets[key(t) + 1];
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  values.resize(sorted.size());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Transition& t : sorted) values[cursor[key(t)]++] = value(t);
}

}  // namespace

FiniteLts FiniteLts::build(std::size_t num_states, std::vector<std::string> labels,
                           std::span<const NamedTransition> transitions, StateId initial) {
  std::map<std::string, std::uint32_t, std::less<>> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], static_cast<std::uint32_t>(i)).second) {
      throw LtsError("duplicate label name \"" + labels[i] + "\"");
    }
  }
  std::vector<Transition> resolved;
  resolved.reserve(transitions.size());
  for (const NamedTransition& t : transitions) {
    if (t.source >= num_states || t.target >= num_states) {
      throw LtsError("transition " + describe(t.source, t.label, t.target) +
                     " refers to a state outside [0, " + std::to_string(num_states) + ")");
    }
    auto it = index.find(t.label);
    if (it == index.end()) {
      throw LtsError("transition " + describe(t.source, t.label, t.target) +
                     " uses an undeclared label");
    }
    resolved.push_back(Transition{StateId(static_cast<std::uint32_t>(t.source)),
                                  LabelId(it->second),
                                  StateId(static_cast<std::uint32_t>(t.target))});
  }
  return FiniteLts(num_states, std::move(labels), std::move(resolved), initial);
}

FiniteLts::FiniteLts(std::size_t num_states, std::vector<std::string> labels,
                     std::vector<Transition> transitions, StateId initial)
    : num_states_(num_states), labels_(std::move(labels)), initial_(initial) {
  if (num_states_ > 0 ? initial_.value >= num_states_ : initial_.value != 0) {
    throw LtsError("initial state " + std::to_string(initial_.value) + " is out of range");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!label_index_.emplace(labels_[i], static_cast<std::uint32_t>(i)).second) {
      throw LtsError("duplicate label name \"" + labels_[i] + "\"");
    }
  }
  for (const Transition& t : transitions) {
    if (!is_state(t.source) || !is_state(t.target) || !is_label(t.label)) {
      throw LtsError("transition (" + std::to_string(t.source.value) + ", #" +
                     std::to_string(t.label.value) + ", " + std::to_string(t.target.value) +
                     ") is out of range");
    }
  }
  std::sort(transitions.begin(), transitions.end());
  transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
  transitions_ = std::move(transitions);

  const std::size_t num_slots = num_states_ * labels_.size();
  fill_index(
      transitions_, num_slots, [this](const Transition& t) { return slot(t.source, t.label); },
      [](const Transition& t) { return t.target; }, forward_offsets_, forward_targets_);

  std::vector<Transition> by_target = transitions_;
  std::sort(by_target.begin(), by_target.end(), [](const Transition& a, const Transition& b) {
    return std::tie(a.target, a.label, a.source) < std::tie(b.target, b.label, b.source);
  });
  fill_index(
      by_target, num_slots, [this](const Transition& t) { return slot(t.target, t.label); },
      [](const Transition& t) { return t.source; }, backward_offsets_, backward_sources_);
}

const std::string& FiniteLts::label_name(LabelId label) const {
  check_label(label);
  return labels_[label.value];
}

std::optional<LabelId> FiniteLts::find_label(std::string_view name) const {
  if (labels_.size() <= 8) {
    for (std::uint32_t i = 0; i < labels_.size(); ++i) {
      const std::string& l = labels_[i];
      if (l.size() == name.size() && std::equal(l.begin(), l.end(), name.begin())) return LabelId(i);
    }
    return std::nullopt;
  }
  auto it = label_index_.find(name);
  if (it == label_index_.end()) return std::nullopt;
  return LabelId(it->second);
}

void FiniteLts::reject(StateId s, LabelId l) const {
  check_state(s);
  check_label(l);
  throw InvariantViolation("FiniteLts::reject called with valid ids");
}

bool FiniteLts::has_transition(StateId s, LabelId label, StateId target) const {
  check_state(target);
  auto succ = image(s, label);
  return std::binary_search(succ.begin(), succ.end(), target);
}

std::vector<StateId> FiniteLts::states() const {
  std::vector<StateId> out;
  out.reserve(num_states_);
  for (std::uint32_t i = 0; i < num_states_; ++i) out.emplace_back(i);
  return out;
}

void FiniteLts::check_state(StateId s) const {
  if (!is_state(s)) {
    throw UsageError("state " + std::to_string(s.value) + " is not in [0, " +
                     std::to_string(num_states_) + ")");
  }
}

void FiniteLts::check_label(LabelId l) const {
  if (!is_label(l)) {
    throw UsageError("label id " + std::to_string(l.value) + " is not in [0, " +
                     std::to_string(labels_.size()) + ")");
  }
}

bool operator==(const FiniteLts& a, const FiniteLts& b) {
  if (a.num_states_ != b.num_states_ || a.initial_ != b.initial_ ||
      a.transitions_.size() != b.transitions_.size() || a.labels_.size() != b.labels_.size()) {
    return false;
  }
  auto named = [](const FiniteLts& lts) {
    std::vector<std::tuple<std::uint32_t, std::string_view, std::uint32_t>> out;
    out.reserve(lts.transitions_.size());
    for (const Transition& t : lts.transitions_) {
      out.emplace_back(t.source.value, lts.labels_[t.label.value], t.target.value);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto names_a = a.labels_;
  auto names_b = b.labels_;
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  return names_a == names_b && named(a) == named(b);
}

}  // namespace hmlkit
