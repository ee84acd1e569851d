#pragma once

// Instance generators shared by the unit and acceptance suites: exhaustive
// enumeration of tiny LTSs and formulas, and seeded random LTSs, formulas and
// CCS terms.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hmlkit/ccs.hpp"
#include "hmlkit/formula.hpp"
#include "hmlkit/lts.hpp"

namespace hmlkit::testing {

using Rng = std::mt19937_64;

inline std::vector<std::string> label_names(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Calls visit(lts) for every LTS with 1..max_states states and 0..max_labels
/// labels ("a", "b", ...): every subset of the possible transitions.
inline void for_each_small_lts(std::size_t max_states, std::size_t max_labels,
                               const std::function<void(const FiniteLts&)>& visit) {
  for (std::size_t n = 1; n <= max_states; ++n) {
    for (std::size_t l = 0; l <= max_labels; ++l) {
      const std::size_t slots = n * l * n;
      std::vector<Transition> all;
      for (std::uint32_t s = 0; s < n; ++s) {
        for (std::uint32_t a = 0; a < l; ++a) {
          for (std::uint32_t t = 0; t < n; ++t) all.push_back({StateId(s), LabelId(a), StateId(t)});
        }
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
        std::vector<Transition> chosen;
        for (std::size_t i = 0; i < slots; ++i) {
          if ((mask >> i) & 1U) chosen.push_back(all[i]);
        }
        visit(FiniteLts(n, label_names(l), std::move(chosen)));
      }
    }
  }
}

/// Every formula over `labels` with at most max_size AST nodes. With
/// canonical set, And/Or chains are right-nested (the left operand of an And
/// is never an And, likewise for Or) and argument-ordered (each left operand
/// comes no later in enumeration order than the first element of the chain
/// to its right).
inline std::vector<Formula> enumerate_formulas(const std::vector<std::string>& labels,
                                               std::size_t max_size, bool canonical = true) {
  if (max_size == 0) return {};
  struct Entry {
    Formula f;
    std::size_t order;       // position in the final enumeration
    std::size_t chain_head;  // order of the first operand of an And/Or chain
  };
  std::vector<std::vector<Entry>> by_size(max_size + 1);
  std::size_t next = 0;
  auto add = [&](std::size_t size, Formula f, std::size_t head) {
    by_size[size].push_back({std::move(f), next, head == SIZE_MAX ? next : head});
    ++next;
  };
  add(1, Formula::tt(), SIZE_MAX);
  add(1, Formula::ff(), SIZE_MAX);
  for (std::size_t size = 2; size <= max_size; ++size) {
    for (std::size_t i = 0; i < by_size[size - 1].size(); ++i) {
      for (const std::string& l : labels) {
        add(size, Formula::diamond(l, by_size[size - 1][i].f), SIZE_MAX);
        add(size, Formula::box(l, by_size[size - 1][i].f), SIZE_MAX);
      }
    }
    for (const FormulaKind kind : {FormulaKind::And, FormulaKind::Or}) {
      for (std::size_t left = 1; left + 1 < size; ++left) {
        const std::size_t right = size - 1 - left;
        for (std::size_t i = 0; i < by_size[left].size(); ++i) {
          const Entry& x = by_size[left][i];
          if (canonical && x.f.kind() == kind) continue;
          for (std::size_t j = 0; j < by_size[right].size(); ++j) {
            const Entry& y = by_size[right][j];
            const std::size_t y_head = y.f.kind() == kind ? y.chain_head : y.order;
            if (canonical && x.order > y_head) continue;
            add(size, kind == FormulaKind::And ? Formula::conj(x.f, y.f) : Formula::disj(x.f, y.f),
                x.order);
          }
        }
      }
    }
  }
  std::vector<Formula> all;
  for (auto& group : by_size) {
    for (Entry& e : group) all.push_back(std::move(e.f));
  }
  return all;
}

/// Random formula of modal depth at most max_depth.
inline Formula random_formula(Rng& rng, const std::vector<std::string>& labels,
                              std::size_t max_depth, std::size_t max_binary_nesting = 3) {
  const std::size_t choice = uniform(rng, 0, 9);
  if (choice <= 1 || (max_depth == 0 && max_binary_nesting == 0)) {
    return coin(rng, 0.5) ? Formula::tt() : Formula::ff();
  }
  if ((choice <= 5 && max_depth > 0 && !labels.empty()) || max_binary_nesting == 0) {
    if (max_depth == 0 || labels.empty()) return coin(rng, 0.5) ? Formula::tt() : Formula::ff();
    const std::string& l = labels[uniform(rng, 0, labels.size() - 1)];
    Formula body = random_formula(rng, labels, max_depth - 1, max_binary_nesting);
    return coin(rng, 0.5) ? Formula::diamond(l, std::move(body)) : Formula::box(l, std::move(body));
  }
  Formula a = random_formula(rng, labels, max_depth, max_binary_nesting - 1);
  Formula b = random_formula(rng, labels, max_depth, max_binary_nesting - 1);
  return coin(rng, 0.5) ? Formula::conj(std::move(a), std::move(b))
                        : Formula::disj(std::move(a), std::move(b));
}

/// Random formula with an arbitrary shape, labels drawn from a pool that
/// includes names needing quotes. Used by the printer/parser round trip.
inline Formula random_syntax(Rng& rng, std::size_t budget) {
  static const std::vector<std::string> pool = {"a",  "b",   "tau",     "'a",   "send!1",
                                                "tt", "x y", "q\"uote", "[br]", "a|b"};
  if (budget <= 1) return coin(rng, 0.5) ? Formula::tt() : Formula::ff();
  switch (uniform(rng, 0, 3)) {
    case 0:
      return Formula::diamond(pool[uniform(rng, 0, pool.size() - 1)], random_syntax(rng, budget - 1));
    case 1:
      return Formula::box(pool[uniform(rng, 0, pool.size() - 1)], random_syntax(rng, budget - 1));
    default: {
      const std::size_t left = uniform(rng, 1, budget - 1);
      Formula a = random_syntax(rng, left);
      Formula b = random_syntax(rng, budget - left);
      return coin(rng, 0.5) ? Formula::conj(std::move(a), std::move(b))
                            : Formula::disj(std::move(a), std::move(b));
    }
  }
}

/// Uniformly random transitions: each (s, label, t) present with probability
/// density.
inline FiniteLts random_lts(Rng& rng, std::size_t num_states, std::size_t num_labels,
                            double density) {
  std::vector<Transition> ts;
  for (std::uint32_t s = 0; s < num_states; ++s) {
    for (std::uint32_t a = 0; a < num_labels; ++a) {
      for (std::uint32_t t = 0; t < num_states; ++t) {
        if (coin(rng, density)) ts.push_back({StateId(s), LabelId(a), StateId(t)});
      }
    }
  }
  return FiniteLts(num_states, label_names(num_labels), std::move(ts));
}

/// An LTS with many bisimilar states: a random base system whose states are
/// copied, each copy following the base transitions into some copy of the
/// base target. Copies of one base state are bisimilar by construction.
inline FiniteLts random_lts_with_copies(Rng& rng, std::size_t num_states, std::size_t num_labels) {
  const std::size_t base_states = uniform(rng, 1, std::max<std::size_t>(1, num_states / 2));
  const double density = 1.5 / static_cast<double>(base_states * std::max<std::size_t>(1, num_labels));
  FiniteLts base = random_lts(rng, base_states, num_labels, std::min(0.9, density + 0.05));
  std::vector<std::uint32_t> origin(num_states);
  std::vector<std::vector<std::uint32_t>> copies(base_states);
  for (std::uint32_t s = 0; s < num_states; ++s) {
    origin[s] = s < base_states ? s : static_cast<std::uint32_t>(uniform(rng, 0, base_states - 1));
    copies[origin[s]].push_back(s);
  }
  std::vector<Transition> ts;
  for (std::uint32_t s = 0; s < num_states; ++s) {
    for (const Transition& t : base.transitions()) {
      if (t.source.value != origin[s]) continue;
      const auto& targets = copies[t.target.value];
      const std::size_t picks = uniform(rng, 1, std::min<std::size_t>(2, targets.size()));
      for (std::size_t i = 0; i < picks; ++i) {
        ts.push_back({StateId(s), t.label, StateId(targets[uniform(rng, 0, targets.size() - 1)])});
      }
    }
  }
  return FiniteLts(num_states, label_names(num_labels), std::move(ts));
}

/// Mix of the two generators above, with 2..max_states states and 1..3 labels.
inline FiniteLts random_mixed_lts(Rng& rng, std::size_t max_states) {
  const std::size_t n = uniform(rng, 2, max_states);
  const std::size_t l = uniform(rng, 1, 3);
  if (coin(rng, 0.5)) return random_lts_with_copies(rng, n, l);
  const double density = (0.5 + static_cast<double>(uniform(rng, 0, 20)) / 10.0) /
                         static_cast<double>(n * l);
  return random_lts(rng, n, l, std::min(1.0, density));
}

/// Random finite CCS term over actions a, b, c (and co-actions) with at
/// most `depth` nested operators. Constants are drawn from `constants`.
inline ccs::Process random_process(Rng& rng, std::size_t depth,
                                   const std::vector<std::string>& constants = {}) {
  using ccs::Action;
  using ccs::Process;
  static const std::vector<std::string> names = {"a", "b", "c"};
  auto random_action = [&]() {
    const std::size_t k = uniform(rng, 0, 6);
    if (k == 6) return Action::tau();
    return k % 2 == 0 ? Action::input(names[k / 2]) : Action::output(names[k / 2]);
  };
  if (depth == 0) {
    if (!constants.empty() && coin(rng, 0.3)) {
      return Process::constant(constants[uniform(rng, 0, constants.size() - 1)]);
    }
    return coin(rng, 0.5) ? Process::nil() : Process::prefix(random_action(), Process::nil());
  }
  switch (uniform(rng, 0, 5)) {
    case 0:
    case 1:
      return Process::prefix(random_action(), random_process(rng, depth - 1, constants));
    case 2:
      return Process::sum(random_process(rng, depth - 1, constants),
                          random_process(rng, depth - 1, constants));
    case 3:
      return Process::par(random_process(rng, depth - 1, constants),
                          random_process(rng, depth - 1, constants));
    case 4:
      return Process::restrict(random_process(rng, depth - 1, constants),
                               {names[uniform(rng, 0, names.size() - 1)]});
    default:
      return random_process(rng, 0, constants);
  }
}

/// Guarded, finite-control definitions: bodies are sums of prefixes whose
/// continuations mention constants but never use parallel composition.
inline ccs::CcsDefs random_defs(Rng& rng, std::size_t count) {
  using ccs::Action;
  using ccs::Process;
  std::vector<std::string> constants;
  for (std::size_t i = 0; i < count; ++i) constants.push_back("K" + std::to_string(i));
  static const std::vector<std::string> names = {"a", "b", "c"};
  ccs::CcsDefs defs;
  for (const std::string& name : constants) {
    const std::size_t branches = uniform(rng, 1, 3);
    Process body = Process::nil();
    for (std::size_t b = 0; b < branches; ++b) {
      const std::size_t k = uniform(rng, 0, 6);
      Action a = k == 6 ? Action::tau()
                        : (k % 2 == 0 ? Action::input(names[k / 2]) : Action::output(names[k / 2]));
      Process cont = coin(rng, 0.7)
                         ? Process::constant(constants[uniform(rng, 0, constants.size() - 1)])
                         : Process::nil();
      Process branch = Process::prefix(std::move(a), std::move(cont));
      body = b == 0 ? branch : Process::sum(std::move(branch), std::move(body));
    }
    defs.emplace(name, std::move(body));
  }
  return defs;
}

}  // namespace hmlkit::testing
