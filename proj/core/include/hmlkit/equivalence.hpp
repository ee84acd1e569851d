#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hmlkit/error.hpp"
#include "hmlkit/formula.hpp"
#include "hmlkit/lts.hpp"

namespace hmlkit {

/// Equivalence classes of the states of one LTS, together with the history
/// of the refinement that produced them.
///
/// Round 0 puts every state in one class. Round k splits classes by the set
/// of (label, class at round k-1) pairs their members can reach, so two
/// states share a class at round k exactly when no formula of modal depth
/// <= k tells them apart. Only rounds that actually split something are
/// recorded; the last recorded round is the final partition.
class Partition {
 public:
  Partition() = default;

  std::size_t num_states() const noexcept { return history_.empty() ? 0 : history_[0].size(); }
  std::size_t num_classes() const noexcept { return num_classes_; }
  // Number of splitting rounds; at most num_states() - 1.
  std::size_t num_rounds() const noexcept { return history_.empty() ? 0 : history_.size() - 1; }

  std::uint32_t class_of(StateId s) const;
  std::uint32_t class_at_round(StateId s, std::size_t round) const;
  bool same_class(StateId a, StateId b) const { return class_of(a) == class_of(b); }

  /// First round at which a and b sit in different classes, or nullopt if
  /// they are never separated.
  std::optional<std::size_t> separation_round(StateId a, StateId b) const;
  /// Last round at which the class containing s lost members (0 if never).
  std::size_t split_round(StateId s) const;

  // Classes ordered by smallest member; members ascending.
  std::vector<std::vector<StateId>> classes() const;

 private:
  friend Partition bisimilarity(const FiniteLts& lts);

  void check(StateId s) const;

  std::vector<std::vector<std::uint32_t>> history_;
  std::vector<std::size_t> split_round_;
  std::size_t num_classes_ = 0;
};

/// A finite binary relation on the states of one LTS, kept sorted and free
/// of duplicates.
class ExplicitRelation {
 public:
  using Pair = std::pair<StateId, StateId>;

  ExplicitRelation() = default;
  explicit ExplicitRelation(std::vector<Pair> pairs);

  static ExplicitRelation identity(std::size_t num_states);
  // All pairs of states sharing a class (includes the identity).
  static ExplicitRelation from_partition(const Partition& partition);

  bool contains(StateId a, StateId b) const;
  std::span<const Pair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

 private:
  std::vector<Pair> pairs_;
};

// A pair (first, second) of the relation and a transition of one side that
// the other side cannot answer inside the relation. When moved_second is
// false, first -label-> move is unmatched by second; otherwise
// second -label-> move is unmatched by first.
struct TransferFailure {
  StateId first;
  StateId second;
  LabelId label;
  StateId move;
  bool moved_second = false;

  friend bool operator==(const TransferFailure&, const TransferFailure&) = default;
};

struct BisimulationCheck {
  bool holds = true;
  std::optional<TransferFailure> counterexample;

  explicit operator bool() const noexcept { return holds; }
};

/// Checks both transfer conditions for every pair of r. The first failing
/// pair, in relation order, is reported.
BisimulationCheck is_bisimulation(const FiniteLts& lts, const ExplicitRelation& r);

/// Coarsest bisimulation, by signature refinement. O(|->| log |->|) per
/// round and at most |S| - 1 rounds.
Partition bisimilarity(const FiniteLts& lts);

bool bisimilar(const FiniteLts& lts, StateId s1, StateId s2);

/// Theory equivalence. Every FiniteLts is image-finite, where theory
/// equivalence and bisimilarity coincide, so this is decided by bisimilar().
bool theory_eq(const FiniteLts& lts, StateId s1, StateId s2);

/// Every set of states that is the denotation of some formula within a size
/// and modal-depth bound, each with the first such formula found. This is
/// the brute-force side of the theory_eq() cross-check: it never looks at
/// bisimilarity. Formulas are enumerated up to semantic equality, which is
/// exact because a formula's denotation depends only on its children's.
class BoundedTheory {
 public:
  static constexpr std::size_t kMaxStates = 8;
  static constexpr std::size_t kMaxLabels = 4;
  static constexpr std::size_t kMaxSize = 12;
  static constexpr std::size_t kMaxDepth = 8;

  /// Throws ResourceError when the LTS or the bounds exceed the caps above.
  BoundedTheory(const FiniteLts& lts, std::size_t max_size, std::size_t max_depth);

  /// A formula within the bounds satisfied by s1 and not by s2, if any.
  std::optional<Formula> distinguisher(StateId s1, StateId s2) const;

  // Number of distinct denotations reached.
  std::size_t num_denotations() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    std::uint32_t mask;
    Formula formula;
  };

  std::size_t num_states_;
  std::vector<Entry> entries_;
};

/// True iff no formula with at most max_size nodes and modal depth at most
/// max_depth distinguishes s1 from s2.
bool theory_eq_bounded(const FiniteLts& lts, StateId s1, StateId s2, std::size_t max_size,
                       std::size_t max_depth);

struct DistinguishResult {
  enum class Side { First, Second };

  // Empty when the two states are bisimilar.
  std::optional<Formula> formula;
  Side satisfied_by = Side::First;

  bool equivalent() const noexcept { return !formula.has_value(); }
};

/// Builds a formula satisfied by s1 and refuted by s2, or reports that the
/// states are bisimilar. The result is checked against satisfies() before it
/// is returned; its modal depth never exceeds the pair's separation round.
DistinguishResult distinguishing_formula(const FiniteLts& lts, StateId s1, StateId s2);
DistinguishResult distinguishing_formula(const FiniteLts& lts, const Partition& partition,
                                         StateId s1, StateId s2);

class NotABisimulation : public Error {
 public:
  explicit NotABisimulation(TransferFailure failure);
  const TransferFailure& failure() const noexcept { return failure_; }

 private:
  TransferFailure failure_;
};

/// Pairs (s1, s2) of r with s1 |= f and not s2 |= f. Throws
/// NotABisimulation if r is not a bisimulation.
std::vector<ExplicitRelation::Pair> bisimulation_invariance_check(const FiniteLts& lts,
                                                                  const ExplicitRelation& r,
                                                                  const Formula& f);

}  // namespace hmlkit
