#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "hmlkit/equivalence.hpp"
#include "hmlkit/semantics.hpp"

namespace hmlkit {
namespace {

const Formula T = Formula::tt();
const Formula F = Formula::ff();
constexpr StateId S0{0};
constexpr StateId S1{1};
constexpr StateId S2{2};
constexpr StateId S3{3};

FiniteLts make(std::size_t n, std::vector<NamedTransition> ts) {
  return FiniteLts::build(n, {"a"}, ts);
}

// 0 -a-> 1, 2 -a-> 3
FiniteLts two_edges() { return make(4, {{0, "a", 1}, {2, "a", 3}}); }
// 0 -a-> 0, 1 terminal
FiniteLts loop_and_stop() { return make(2, {{0, "a", 0}}); }
// 0 -a-> 1, 2 -a-> 3 -a-> 3
FiniteLts stop_vs_loop() { return make(4, {{0, "a", 1}, {2, "a", 3}, {3, "a", 3}}); }

using Classes = std::vector<std::vector<StateId>>;

// Greatest bisimulation by deleting pairs that break a transfer condition
// until nothing changes. Quadratic space; only for small systems.
std::vector<std::vector<bool>> naive_bisimilarity(const FiniteLts& lts) {
  const std::size_t n = lts.num_states();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  auto matched = [&](StateId p, StateId q, LabelId l) {
    for (StateId p2 : lts.image(p, l)) {
      bool found = false;
      for (StateId q2 : lts.image(q, l)) found = found || rel[p2.value][q2.value];
      if (!found) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId p : lts.states()) {
      for (StateId q : lts.states()) {
        if (!rel[p.value][q.value]) continue;
        for (std::uint32_t l = 0; l < lts.num_labels(); ++l) {
          if (!matched(p, q, LabelId(l)) || !matched(q, p, LabelId(l))) {
            rel[p.value][q.value] = false;
            changed = true;
            break;
          }
        }
      }
    }
  }
  return rel;
}

TEST(IsBisimulationTest, Examples) {
  const FiniteLts lts = loop_and_stop();
  EXPECT_TRUE(is_bisimulation(lts, ExplicitRelation{}));
  EXPECT_TRUE(is_bisimulation(lts, ExplicitRelation::identity(2)));
  const BisimulationCheck check = is_bisimulation(lts, ExplicitRelation({{S0, S1}}));
  ASSERT_FALSE(check);
  ASSERT_TRUE(check.counterexample.has_value());
  EXPECT_EQ(*check.counterexample, (TransferFailure{S0, S1, LabelId{0}, S0, false}));
}

TEST(IsBisimulationTest, ReportsMovesOfTheSecondState) {
  const FiniteLts lts = loop_and_stop();
  const BisimulationCheck check = is_bisimulation(lts, ExplicitRelation({{S1, S0}}));
  ASSERT_FALSE(check);
  EXPECT_EQ(*check.counterexample, (TransferFailure{S1, S0, LabelId{0}, S0, true}));
}

TEST(IsBisimulationTest, RejectsInvalidIds) {
  EXPECT_THROW(is_bisimulation(loop_and_stop(), ExplicitRelation({{S0, S3}})), UsageError);
}

TEST(BisimilarityTest, Examples) {
  EXPECT_EQ(bisimilarity(make(3, {})).classes(), (Classes{{S0, S1, S2}}));
  EXPECT_EQ(bisimilarity(two_edges()).classes(), (Classes{{S0, S2}, {S1, S3}}));
  EXPECT_EQ(bisimilarity(loop_and_stop()).classes(), (Classes{{S0}, {S1}}));
}

TEST(BisimilarityTest, BisimilarAndTheoryEq) {
  EXPECT_TRUE(bisimilar(make(2, {}), S0, S1));
  EXPECT_TRUE(bisimilar(two_edges(), S0, S2));
  EXPECT_FALSE(bisimilar(loop_and_stop(), S0, S1));
  EXPECT_TRUE(theory_eq(two_edges(), S1, S1));
  EXPECT_TRUE(theory_eq(two_edges(), S0, S2));
  EXPECT_FALSE(theory_eq(loop_and_stop(), S0, S1));
}

TEST(BisimilarityTest, RoundsAndSplits) {
  const Partition p = bisimilarity(stop_vs_loop());
  // Round 1 separates the terminal state 1 from the rest; round 2 tells 0
  // (which can reach a terminal state) from 2 and 3.
  EXPECT_EQ(p.separation_round(S1, S0), std::optional<std::size_t>{1});
  EXPECT_EQ(p.separation_round(S0, S2), std::optional<std::size_t>{2});
  EXPECT_EQ(p.separation_round(S2, S0), std::optional<std::size_t>{2});
  EXPECT_EQ(p.separation_round(S2, S3), std::nullopt);
  EXPECT_EQ(p.split_round(S1), 1u);
  EXPECT_EQ(p.split_round(S0), 2u);
  EXPECT_EQ(p.class_at_round(S0, 0), p.class_at_round(S1, 0));
  EXPECT_THROW(p.class_of(StateId{4}), UsageError);
}

TEST(BisimilarityTest, MatchesNaiveFixpoint) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    const FiniteLts lts = testing::random_mixed_lts(rng, 12);
    const Partition p = bisimilarity(lts);
    const auto rel = naive_bisimilarity(lts);
    for (StateId a : lts.states()) {
      for (StateId b : lts.states()) ASSERT_EQ(p.same_class(a, b), rel[a.value][b.value]);
    }
  }
}

TEST(BisimilarityTest, PartitionInvariants) {
  testing::Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const FiniteLts lts = testing::random_mixed_lts(rng, 30);
    const Partition p = bisimilarity(lts);
    std::set<std::uint32_t> ids;
    for (StateId s : lts.states()) ids.insert(p.class_of(s));
    ASSERT_EQ(ids.size(), p.num_classes());
    ASSERT_EQ(*ids.rbegin() + 1, p.num_classes());
    ASSERT_TRUE(is_bisimulation(lts, ExplicitRelation::from_partition(p)));
    for (StateId a : lts.states()) {
      for (StateId b : lts.states()) {
        ASSERT_EQ(p.separation_round(a, b), p.separation_round(b, a));
        ASSERT_EQ(p.separation_round(a, b).has_value(), !p.same_class(a, b));
        if (auto k = p.separation_round(a, b)) ASSERT_LE(*k, lts.num_states() - 1);
      }
    }
  }
}

TEST(BoundedTheoryTest, Examples) {
  EXPECT_TRUE(theory_eq_bounded(loop_and_stop(), S0, S0, 5, 3));
  const FiniteLts lts = loop_and_stop();
  EXPECT_FALSE(theory_eq_bounded(lts, S0, S1, 3, 3));
  const auto witness = BoundedTheory(lts, 3, 3).distinguisher(S0, S1);
  ASSERT_TRUE(witness.has_value());
  EXPECT_TRUE(satisfies(lts, S0, *witness));
  EXPECT_FALSE(satisfies(lts, S1, *witness));
  EXPECT_TRUE(theory_eq_bounded(two_edges(), S0, S2, 7, 3));
}

TEST(BoundedTheoryTest, BoundsMatter) {
  // 0 and 2 differ only at depth 2.
  EXPECT_TRUE(theory_eq_bounded(stop_vs_loop(), S0, S2, 7, 1));
  EXPECT_FALSE(theory_eq_bounded(stop_vs_loop(), S0, S2, 7, 2));
  EXPECT_TRUE(theory_eq_bounded(stop_vs_loop(), S0, S2, 2, 3));
  EXPECT_FALSE(theory_eq_bounded(stop_vs_loop(), S0, S2, 3, 3));
}

TEST(BoundedTheoryTest, ResourceGuards) {
  EXPECT_THROW(BoundedTheory(make(9, {}), 3, 3), ResourceError);
  EXPECT_THROW(BoundedTheory(FiniteLts::build(2, {"a", "b", "c", "d", "e"}, {}), 3, 3),
               ResourceError);
  EXPECT_THROW(BoundedTheory(make(2, {}), BoundedTheory::kMaxSize + 1, 3), ResourceError);
  EXPECT_THROW(BoundedTheory(make(2, {}), 3, BoundedTheory::kMaxDepth + 1), ResourceError);
}

// The enumerator works on denotations rather than formulas. Compare it with
// plain enumeration of every formula within the bounds.
TEST(BoundedTheoryTest, MatchesNaiveEnumeration) {
  const std::size_t max_size = 5;
  for (std::size_t labels = 1; labels <= 2; ++labels) {
    const auto formulas = testing::enumerate_formulas(testing::label_names(labels), max_size, false);
    for (std::size_t depth = 0; depth <= 3; ++depth) {
      testing::Rng rng(47 + depth);
      for (int trial = 0; trial < 60; ++trial) {
        const FiniteLts lts = testing::random_lts(rng, testing::uniform(rng, 1, 3), labels, 0.35);
        const BoundedTheory theory(lts, max_size, depth);
        for (StateId a : lts.states()) {
          for (StateId b : lts.states()) {
            bool naive = false;
            for (const Formula& f : formulas) {
              if (modal_depth(f) > depth) continue;
              if (satisfies(lts, a, f) != satisfies(lts, b, f)) {
                naive = true;
                break;
              }
            }
            const auto witness = theory.distinguisher(a, b);
            ASSERT_EQ(witness.has_value(), naive);
            if (witness) {
              ASSERT_LE(formula_size(*witness), max_size);
              ASSERT_LE(modal_depth(*witness), depth);
              ASSERT_TRUE(satisfies(lts, a, *witness));
              ASSERT_FALSE(satisfies(lts, b, *witness));
            }
          }
        }
      }
    }
  }
}

TEST(DistinguishTest, Examples) {
  EXPECT_TRUE(distinguishing_formula(two_edges(), S0, S2).equivalent());

  const DistinguishResult r1 = distinguishing_formula(loop_and_stop(), S0, S1);
  ASSERT_FALSE(r1.equivalent());
  EXPECT_EQ(*r1.formula, Formula::diamond("a", T));
  EXPECT_EQ(r1.satisfied_by, DistinguishResult::Side::First);

  const FiniteLts lts = stop_vs_loop();
  const DistinguishResult r2 = distinguishing_formula(lts, S0, S2);
  ASSERT_FALSE(r2.equivalent());
  EXPECT_EQ(*r2.formula, Formula::diamond("a", Formula::box("a", F)));
  EXPECT_EQ(r2.satisfied_by, DistinguishResult::Side::First);
  EXPECT_TRUE(satisfies(lts, S0, *r2.formula));
  EXPECT_FALSE(satisfies(lts, S2, *r2.formula));
}

TEST(DistinguishTest, OnlySecondStateCanMove) {
  const FiniteLts lts = loop_and_stop();
  const DistinguishResult r = distinguishing_formula(lts, S1, S0);
  ASSERT_FALSE(r.equivalent());
  EXPECT_EQ(*r.formula, neg(Formula::diamond("a", T)));
  EXPECT_EQ(r.satisfied_by, DistinguishResult::Side::First);
  EXPECT_TRUE(satisfies(lts, S1, *r.formula));
  EXPECT_FALSE(satisfies(lts, S0, *r.formula));
}

TEST(DistinguishTest, RandomPairs) {
  testing::Rng rng(53);
  for (int trial = 0; trial < 150; ++trial) {
    const FiniteLts lts = testing::random_mixed_lts(rng, 20);
    const Partition p = bisimilarity(lts);
    for (StateId a : lts.states()) {
      for (StateId b : lts.states()) {
        const DistinguishResult r = distinguishing_formula(lts, p, a, b);
        ASSERT_EQ(r.equivalent(), p.same_class(a, b));
        if (r.equivalent()) continue;
        ASSERT_TRUE(satisfies(lts, a, *r.formula));
        ASSERT_FALSE(satisfies(lts, b, *r.formula));
        ASSERT_LE(modal_depth(*r.formula), *p.separation_round(a, b));
      }
    }
  }
}

TEST(DistinguishTest, Deterministic) {
  const FiniteLts lts = stop_vs_loop();
  EXPECT_EQ(*distinguishing_formula(lts, S0, S3).formula,
            *distinguishing_formula(lts, S0, S3).formula);
}

TEST(InvarianceCheckTest, Examples) {
  const FiniteLts lts = two_edges();
  EXPECT_TRUE(
      bisimulation_invariance_check(lts, ExplicitRelation::identity(4), Formula::diamond("a", T))
          .empty());
  const ExplicitRelation r = ExplicitRelation::from_partition(bisimilarity(lts));
  EXPECT_TRUE(bisimulation_invariance_check(lts, r, Formula::diamond("a", T)).empty());
  try {
    bisimulation_invariance_check(loop_and_stop(), ExplicitRelation({{S0, S1}}), T);
    FAIL() << "expected NotABisimulation";
  } catch (const NotABisimulation& e) {
    EXPECT_EQ(e.failure(), (TransferFailure{S0, S1, LabelId{0}, S0, false}));
  }
}

TEST(ExplicitRelationTest, Construction) {
  const ExplicitRelation r({{S1, S0}, {S0, S1}, {S1, S0}});
  EXPECT_EQ(r.size(), 2u);
  EXPECT_TRUE(r.contains(S0, S1));
  EXPECT_FALSE(r.contains(S0, S0));
  EXPECT_EQ(ExplicitRelation::identity(3).size(), 3u);
  EXPECT_EQ(ExplicitRelation::from_partition(bisimilarity(two_edges())).size(), 8u);
}

}  // namespace
}  // namespace hmlkit
