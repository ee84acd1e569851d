#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "hmlkit/equivalence.hpp"
#include "hmlkit/semantics.hpp"

namespace hmlkit {

namespace {

struct Move {
  std::size_t score;  // largest separation round among the subproblems
  LabelId label;
  StateId target;
};

// Builds formulas satisfied by the first state of a pair and refuted by the
// second. A pair separated at round k is reduced to pairs separated at
// rounds < k, so the recursion is well founded and the modal depth of the
// result is at most k.
class Synthesizer {
 public:
  Synthesizer(const FiniteLts& lts, const Partition& partition)
      : lts_(lts), partition_(partition) {}

  Formula distinguish(StateId p, StateId q) {
    const auto key = std::make_pair(p.value, q.value);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const std::size_t round = *partition_.separation_round(p, q);
    Formula result;
    if (auto move = best_move(p, q, round)) {
      std::vector<Formula> conjuncts;
      for (StateId q2 : lts_.image(q, move->label)) {
        Formula part = distinguish(move->target, q2);
        if (std::find(conjuncts.begin(), conjuncts.end(), part) == conjuncts.end()) {
          conjuncts.push_back(std::move(part));
        }
      }
      result = Formula::diamond(lts_.label_name(move->label), Formula::conj_all(std::move(conjuncts)));
    } else if (best_move(q, p, round)) {
      // Only q has the unanswerable move: distinguish (q, p) and flip it.
      result = neg(distinguish(q, p));
    } else {
      throw InvariantViolation("no separating move for states " + std::to_string(p.value) +
                               " and " + std::to_string(q.value) + " at round " +
                               std::to_string(round));
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  // Moves p -label-> p2 such that every label-successor of q is separated
  // from p2 before `round`. The best one minimises the largest such
  // separation round, then (label, target).
  std::optional<Move> best_move(StateId p, StateId q, std::size_t round) const {
    std::optional<Move> best;
    for (std::uint32_t l = 0; l < lts_.num_labels(); ++l) {
      const LabelId label(l);
      const auto answers = lts_.image(q, label);
      for (StateId p2 : lts_.image(p, label)) {
        std::size_t score = 0;
        bool usable = true;
        for (StateId q2 : answers) {
          const auto sep = partition_.separation_round(p2, q2);
          if (!sep || *sep >= round) {
            usable = false;
            break;
          }
          score = std::max(score, *sep);
        }
        if (usable && (!best || score < best->score)) best = Move{score, label, p2};
      }
    }
    return best;
  }

  const FiniteLts& lts_;
  const Partition& partition_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Formula> memo_;
};

}  // namespace

DistinguishResult distinguishing_formula(const FiniteLts& lts, StateId s1, StateId s2) {
  return distinguishing_formula(lts, bisimilarity(lts), s1, s2);
}

DistinguishResult distinguishing_formula(const FiniteLts& lts, const Partition& partition,
                                         StateId s1, StateId s2) {
  if (!lts.is_state(s1) || !lts.is_state(s2)) {
    throw UsageError("distinguishing_formula: state out of range");
  }
  if (partition.num_states() != lts.num_states()) {
    throw UsageError("distinguishing_formula: partition belongs to a different LTS");
  }
  if (partition.same_class(s1, s2)) return {};

  Formula f = Synthesizer(lts, partition).distinguish(s1, s2);
  if (!satisfies(lts, s1, f) || satisfies(lts, s2, f)) {
    throw InvariantViolation("synthesised formula " + to_string(f) + " does not separate " +
                             std::to_string(s1.value) + " from " + std::to_string(s2.value));
  }
  return DistinguishResult{std::move(f), DistinguishResult::Side::First};
}

}  // namespace hmlkit
