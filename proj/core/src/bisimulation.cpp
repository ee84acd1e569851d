#include <algorithm>
#include <map>
#include <string>

#include "hmlkit/equivalence.hpp"
#include "hmlkit/semantics.hpp"

namespace hmlkit {

namespace {

using Signature = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

std::string state_text(StateId s) { return std::to_string(s.value); }

}  // namespace

void Partition::check(StateId s) const {
  if (s.value >= num_states()) {
    throw UsageError("state " + state_text(s) + " is not in [0, " + std::to_string(num_states()) +
                     ")");
  }
}

std::uint32_t Partition::class_of(StateId s) const {
  check(s);
  return history_.back()[s.value];
}

std::uint32_t Partition::class_at_round(StateId s, std::size_t round) const {
  check(s);
  return history_[std::min(round, history_.size() - 1)][s.value];
}

std::optional<std::size_t> Partition::separation_round(StateId a, StateId b) const {
  check(a);
  check(b);
  if (history_.back()[a.value] == history_.back()[b.value]) return std::nullopt;
  // Refinement only splits, so "separated at round k" is monotone in k.
  std::size_t lo = 1;
  std::size_t hi = history_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (history_[mid][a.value] != history_[mid][b.value]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::size_t Partition::split_round(StateId s) const {
  check(s);
  return split_round_[s.value];
}

std::vector<std::vector<StateId>> Partition::classes() const {
  std::vector<std::vector<StateId>> out(num_classes_);
  if (history_.empty()) return out;
  for (std::uint32_t s = 0; s < num_states(); ++s) out[history_.back()[s]].emplace_back(s);
  return out;
}

ExplicitRelation::ExplicitRelation(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

ExplicitRelation ExplicitRelation::identity(std::size_t num_states) {
  std::vector<Pair> pairs;
  for (std::uint32_t s = 0; s < num_states; ++s) pairs.emplace_back(StateId(s), StateId(s));
  return ExplicitRelation(std::move(pairs));
}

ExplicitRelation ExplicitRelation::from_partition(const Partition& partition) {
  std::vector<Pair> pairs;
  for (const auto& members : partition.classes()) {
    for (StateId a : members) {
      for (StateId b : members) pairs.emplace_back(a, b);
    }
  }
  return ExplicitRelation(std::move(pairs));
}

bool ExplicitRelation::contains(StateId a, StateId b) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), Pair{a, b});
}

BisimulationCheck is_bisimulation(const FiniteLts& lts, const ExplicitRelation& r) {
  for (const auto& [p, q] : r.pairs()) {
    if (!lts.is_state(p) || !lts.is_state(q)) {
      throw UsageError("relation pair (" + state_text(p) + ", " + state_text(q) +
                       ") is not over this LTS");
    }
  }
  for (const auto& [p, q] : r.pairs()) {
    for (std::uint32_t l = 0; l < lts.num_labels(); ++l) {
      const LabelId label(l);
      const auto p_moves = lts.image(p, label);
      const auto q_moves = lts.image(q, label);
      for (StateId p2 : p_moves) {
        const bool matched = std::any_of(q_moves.begin(), q_moves.end(),
                                         [&](StateId q2) { return r.contains(p2, q2); });
        if (!matched) return {false, TransferFailure{p, q, label, p2, false}};
      }
      for (StateId q2 : q_moves) {
        const bool matched = std::any_of(p_moves.begin(), p_moves.end(),
                                         [&](StateId p2) { return r.contains(p2, q2); });
        if (!matched) return {false, TransferFailure{p, q, label, q2, true}};
      }
    }
  }
  return {true, std::nullopt};
}

Partition bisimilarity(const FiniteLts& lts) {
  const std::size_t n = lts.num_states();
  Partition out;
  out.history_.emplace_back(n, 0);
  out.num_classes_ = n == 0 ? 0 : 1;

  std::vector<Signature> signatures(n);
  while (true) {
    const std::vector<std::uint32_t>& prev = out.history_.back();
    for (const Transition& t : lts.transitions()) {
      signatures[t.source.value].emplace_back(t.label.value, prev[t.target.value]);
    }
    std::map<std::pair<std::uint32_t, Signature>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      Signature& sig = signatures[s];
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, inserted] =
          ids.emplace(std::make_pair(prev[s], sig), static_cast<std::uint32_t>(ids.size()));
      next[s] = it->second;
    }
    const std::size_t count = ids.size();
    for (Signature& sig : signatures) sig.clear();
    if (count == out.num_classes_) break;
    out.num_classes_ = count;
    out.history_.push_back(std::move(next));
  }

  // A class "split" at round k if the block containing s shrank from k-1 to k.
  out.split_round_.assign(n, 0);
  std::vector<std::size_t> prev_sizes(1, n);
  for (std::size_t k = 1; k < out.history_.size(); ++k) {
    std::vector<std::size_t> sizes(n, 0);
    for (std::uint32_t c : out.history_[k]) ++sizes[c];
    for (std::size_t s = 0; s < n; ++s) {
      if (sizes[out.history_[k][s]] < prev_sizes[out.history_[k - 1][s]]) out.split_round_[s] = k;
    }
    prev_sizes = std::move(sizes);
  }
  return out;
}

bool bisimilar(const FiniteLts& lts, StateId s1, StateId s2) {
  return bisimilarity(lts).same_class(s1, s2);
}

bool theory_eq(const FiniteLts& lts, StateId s1, StateId s2) { return bisimilar(lts, s1, s2); }

NotABisimulation::NotABisimulation(TransferFailure failure)
    : Error("relation is not a bisimulation: pair (" + state_text(failure.first) + ", " +
            state_text(failure.second) + ") fails on " +
            (failure.moved_second ? "second" : "first") + " state's move to " +
            state_text(failure.move) + " via label #" + std::to_string(failure.label.value)),
      failure_(failure) {}

std::vector<ExplicitRelation::Pair> bisimulation_invariance_check(const FiniteLts& lts,
                                                                  const ExplicitRelation& r,
                                                                  const Formula& f) {
  const BisimulationCheck check = is_bisimulation(lts, r);
  if (!check) throw NotABisimulation(*check.counterexample);
  const StateSet holds = satisfying_states(lts, f);
  std::vector<ExplicitRelation::Pair> violations;
  for (const auto& [a, b] : r.pairs()) {
    if (holds.contains(a) && !holds.contains(b)) violations.emplace_back(a, b);
  }
  return violations;
}

}  // namespace hmlkit
